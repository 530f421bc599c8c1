// Copyright 2026 The mbvqe Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration: a JSON document with one object per block. Parsing
// collects every problem before failing. See docs/formats.md for the schema.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mbvqe/errors.hpp"
#include "mbvqe/models.hpp"
#include "mbvqe/serialize.hpp"
#include "mbvqe/vqe.hpp"

namespace mbvqe {

struct RunConfig {
  ExperimentConfig experiment;
  std::string output_directory = ".";
  bool emit_dot = true;
  int equiv_vectors = 10;
  double equiv_tol = 1e-8;
};

namespace detail {

inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

inline std::string near_miss(const std::string& key, const std::vector<std::string>& known) {
  std::string best;
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (const auto& k : known) {
    const std::size_t d = edit_distance(key, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (best.empty() || best_d > std::max<std::size_t>(2, key.size() / 3)) return {};
  return best;
}

/// Reads one JSON object, remembering which keys were consumed so the rest
/// can be reported as unknown.
class BlockReader {
 public:
  BlockReader(const Json* obj, std::string path, std::vector<ConfigIssue>& issues)
      : obj_(obj), path_(std::move(path)), issues_(issues) {
    if (obj_ && !obj_->is_object()) {
      issue(path_, "expected an object");
      obj_ = nullptr;
    }
  }

  bool has(const std::string& key) const { return obj_ && obj_->contains(key); }

  const Json* child(const std::string& key) {
    known_.push_back(key);
    return has(key) ? &obj_->at(key) : nullptr;
  }

  std::int64_t get_int(const std::string& key, std::int64_t def, std::int64_t lo, std::int64_t hi) {
    const Json* v = child(key);
    if (!v) return def;
    if (!v->is_number_integer()) {
      issue(at(key), "expected an integer");
      return def;
    }
    const auto x = v->get<std::int64_t>();
    if (x < lo || x > hi) {
      issue(at(key), "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + std::to_string(x));
      return def;
    }
    return x;
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t def) {
    const Json* v = child(key);
    if (!v) return def;
    if (!v->is_number_unsigned()) {
      issue(at(key), "expected a non-negative integer");
      return def;
    }
    return v->get<std::uint64_t>();
  }

  /// `lo_open`/`hi_open` select strict bounds.
  double get_double(const std::string& key, double def, double lo = -std::numeric_limits<double>::infinity(),
                    double hi = std::numeric_limits<double>::infinity(), bool lo_open = false, bool hi_open = false) {
    const Json* v = child(key);
    if (!v) return def;
    if (!v->is_number()) {
      issue(at(key), "expected a number");
      return def;
    }
    const double x = v->get<double>();
    const bool below = lo_open ? !(x > lo) : !(x >= lo);
    const bool above = hi_open ? !(x < hi) : !(x <= hi);
    if (!std::isfinite(x) || below || above) {
      std::ostringstream os;
      os.precision(17);
      os << "must be in " << (lo_open ? "(" : "[") << lo << ", " << hi << (hi_open ? ")" : "]") << ", got " << x;
      issue(at(key), os.str());
      return def;
    }
    return x;
  }

  bool get_bool(const std::string& key, bool def) {
    const Json* v = child(key);
    if (!v) return def;
    if (!v->is_boolean()) {
      issue(at(key), "expected true or false");
      return def;
    }
    return v->get<bool>();
  }

  std::string get_string(const std::string& key, const std::string& def) {
    const Json* v = child(key);
    if (!v) return def;
    if (!v->is_string()) {
      issue(at(key), "expected a string");
      return def;
    }
    return v->get<std::string>();
  }

  template <typename E>
  E get_enum(const std::string& key, E def, const std::vector<E>& options, bool* present = nullptr) {
    const Json* v = child(key);
    if (present) *present = v != nullptr;
    if (!v) return def;
    std::string names;
    for (E e : options) names += std::string(names.empty() ? "" : ", ") + to_string(e);
    if (!v->is_string()) {
      issue(at(key), "expected one of: " + names);
      return def;
    }
    const std::string s = v->get<std::string>();
    for (E e : options)
      if (s == to_string(e)) return e;
    issue(at(key), "unknown value '" + s + "', expected one of: " + names);
    return def;
  }

  void require(const std::string& key) {
    if (!has(key)) issue(at(key), "required");
  }

  /// Keys that exist in the schema but make no sense in this context.
  void reject(const std::string& key, const std::string& why) {
    known_.push_back(key);
    if (has(key)) issue(at(key), why);
  }

  void finish() {
    if (!obj_) return;
    for (const auto& [k, v] : obj_->items()) {
      if (std::find(known_.begin(), known_.end(), k) != known_.end()) continue;
      std::string msg = "unknown key";
      const std::string hint = near_miss(k, known_);
      if (!hint.empty()) msg += "; did you mean '" + hint + "'?";
      issue(at(k), msg);
    }
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  void issue(std::string path, std::string msg) { issues_.push_back({std::move(path), std::move(msg)}); }

 private:
  const Json* obj_;
  std::string path_;
  std::vector<ConfigIssue>& issues_;
  std::vector<std::string> known_;
};

}  // namespace detail

/// Parses and validates a configuration document. Throws ConfigError listing
/// every issue found.
inline RunConfig parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({{"", std::string("not valid JSON: ") + e.what()}});
  }
  std::vector<ConfigIssue> issues;
  RunConfig rc;
  ExperimentConfig& x = rc.experiment;
  detail::BlockReader root(&doc, "", issues);

  {
    const Json* node = root.child("model");
    if (!node) {
      issues.push_back({"model", "required"});
    } else {
      detail::BlockReader b(node, "model", issues);
      b.require("kind");
      bool have_kind = false;
      ModelSpec& m = x.model;
      m.kind = b.get_enum("kind", ModelKind::heisenberg2d,
                          {ModelKind::tfim, ModelKind::heisenberg2d, ModelKind::hubbard}, &have_kind);
      b.require("size");
      m.size = static_cast<int>(b.get_int("size", 2, 2, 64));
      if (!have_kind) {
        // Relevance of the other keys depends on the kind.
        for (const char* k : {"boundary", "J", "gamma", "sign_convention", "t", "U", "jw_ordering"}) b.child(k);
      } else {
        const std::string why = std::string("not used by model kind '") + to_string(m.kind) + "'";
        m.boundary = b.get_enum("boundary", m.kind == ModelKind::hubbard ? Boundary::periodic : Boundary::open,
                                {Boundary::open, Boundary::periodic});
        switch (m.kind) {
          case ModelKind::tfim:
            m.J = b.get_double("J", 1.0);
            m.gamma = b.get_double("gamma", 1.0);
            for (const char* k : {"sign_convention", "t", "U", "jw_ordering"}) b.reject(k, why);
            break;
          case ModelKind::heisenberg2d:
            m.J = b.get_double("J", 1.0);
            m.sign = b.get_enum("sign_convention", SignConvention::antiferromagnetic,
                                {SignConvention::as_written, SignConvention::antiferromagnetic});
            for (const char* k : {"gamma", "t", "U", "jw_ordering"}) b.reject(k, why);
            break;
          case ModelKind::hubbard:
            m.t = b.get_double("t", 1.0);
            m.U = b.get_double("U", 1.0);
            m.ordering =
                b.get_enum("jw_ordering", JWOrdering::interleaved, {JWOrdering::interleaved, JWOrdering::blocked});
            for (const char* k : {"J", "gamma", "sign_convention"}) b.reject(k, why);
            break;
        }
      }
      b.finish();
    }
  }
  {
    detail::BlockReader b(root.child("ansatz"), "ansatz", issues);
    x.ansatz = b.get_enum("kind", AnsatzKind::mbhva,
                          {AnsatzKind::mbhva, AnsatzKind::mbhea, AnsatzKind::cbhva});
    x.depth = static_cast<int>(b.get_int("depth", 1, 1, 64));
    x.share_parameters = b.get_bool("parameter_sharing", false);
    if (x.share_parameters && x.ansatz == AnsatzKind::mbhea)
      b.issue("ansatz.parameter_sharing", "not supported by the mbhea ansatz");
    b.finish();
  }
  {
    detail::BlockReader b(root.child("backend"), "backend", issues);
    x.backend = b.get_enum("kind", BackendKind::circuit,
                           {BackendKind::circuit, BackendKind::mbqc_forced_zero, BackendKind::mbqc_sampled});
    x.seed = b.get_u64("seed", 0);
    b.finish();
  }
  {
    detail::BlockReader b(root.child("optimizer"), "optimizer", issues);
    x.adam.lr = b.get_double("lr", 0.1, 0.0, std::numeric_limits<double>::infinity(), true);
    x.adam.beta1 = b.get_double("beta1", 0.9, 0.0, 1.0, false, true);
    x.adam.beta2 = b.get_double("beta2", 0.999, 0.0, 1.0, false, true);
    x.adam.eps = b.get_double("eps", 1e-8, 0.0, std::numeric_limits<double>::infinity(), true);
    x.steps = static_cast<int>(b.get_int("steps", 200, 0, 1000000));
    x.restarts = static_cast<int>(b.get_int("restarts", 1, 1, 100000));
    x.workers = static_cast<int>(b.get_int("workers", 1, 1, 1024));
    x.gradient = b.get_enum("gradient", GradientMethod::parameter_shift,
                            {GradientMethod::parameter_shift, GradientMethod::reverse_mode});
    if (x.gradient == GradientMethod::reverse_mode && x.backend != BackendKind::circuit)
      b.issue("optimizer.gradient", "reverse_mode needs backend.kind 'circuit'");
    b.finish();
  }
  {
    detail::BlockReader b(root.child("vscore"), "vscore", issues);
    x.e_inf = b.get_double("e_inf", 0.0);
    b.finish();
  }
  {
    detail::BlockReader b(root.child("output"), "output", issues);
    rc.output_directory = b.get_string("directory", ".");
    if (rc.output_directory.empty()) b.issue("output.directory", "must not be empty");
    rc.emit_dot = b.get_bool("emit_dot", true);
    b.finish();
  }
  {
    detail::BlockReader b(root.child("equiv"), "equiv", issues);
    rc.equiv_vectors = static_cast<int>(b.get_int("vectors", 10, 1, 100000));
    rc.equiv_tol = b.get_double("tol", 1e-8, 0.0, std::numeric_limits<double>::infinity(), true);
    b.finish();
  }
  root.finish();
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return rc;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{"", "cannot read config file '" + path + "'"}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// The configuration with every default written out; parsing it back yields
/// the same RunConfig.
inline Json resolved_config_json(const RunConfig& rc) {
  const ExperimentConfig& x = rc.experiment;
  const ModelSpec& m = x.model;
  Json model{{"kind", to_string(m.kind)}, {"size", m.size}, {"boundary", to_string(m.boundary)}};
  switch (m.kind) {
    case ModelKind::tfim:
      model["J"] = m.J;
      model["gamma"] = m.gamma;
      break;
    case ModelKind::heisenberg2d:
      model["J"] = m.J;
      model["sign_convention"] = to_string(m.sign);
      break;
    case ModelKind::hubbard:
      model["t"] = m.t;
      model["U"] = m.U;
      model["jw_ordering"] = to_string(m.ordering);
      break;
  }
  return Json{
      {"model", model},
      {"ansatz", {{"kind", to_string(x.ansatz)}, {"depth", x.depth}, {"parameter_sharing", x.share_parameters}}},
      {"backend", {{"kind", to_string(x.backend)}, {"seed", x.seed}}},
      {"optimizer",
       {{"lr", x.adam.lr},
        {"beta1", x.adam.beta1},
        {"beta2", x.adam.beta2},
        {"eps", x.adam.eps},
        {"steps", x.steps},
        {"restarts", x.restarts},
        {"workers", x.workers},
        {"gradient", to_string(x.gradient)}}},
      {"vscore", {{"e_inf", x.e_inf}}},
      {"output", {{"directory", rc.output_directory}, {"emit_dot", rc.emit_dot}}},
      {"equiv", {{"vectors", rc.equiv_vectors}, {"tol", rc.equiv_tol}}}};
}

}  // namespace mbvqe
