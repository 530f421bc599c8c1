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

// Subcommands behind the CLI. Each one writes its artifacts into an output
// directory and returns the main JSON document it wrote.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "mbvqe/compile.hpp"
#include "mbvqe/config.hpp"
#include "mbvqe/eigensolver.hpp"
#include "mbvqe/executor.hpp"
#include "mbvqe/serialize.hpp"
#include "mbvqe/vqe.hpp"

namespace mbvqe {

namespace fs = std::filesystem;

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitNumerical = 3, kExitCapacity = 4 };

namespace detail {

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

inline void write_json(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace detail

// ---- compile --------------------------------------------------------------

inline Json cmd_compile(const RunConfig& rc, const fs::path& out) {
  const ExperimentConfig& x = rc.experiment;
  const Ansatz a = make_ansatz(x.model, x.ansatz, x.depth, x.share_parameters);
  const Json pj = pattern_to_json(a.pattern);
  detail::write_json(out / "pattern.json", pj);
  detail::write_json(out / "circuit.json", circuit_to_json(a.circuit));
  if (rc.emit_dot) detail::write_text(out / "pattern.dot", emit_dot(a.pattern));
  return pj;
}

// ---- resources ------------------------------------------------------------

/// Reference counts for the configured model, where published ones exist.
inline Json reference_counts(const ModelSpec& m, int depth) {
  Json v = Json::object();
  const int n = m.size;
  switch (m.kind) {
    case ModelKind::heisenberg2d:
      if (m.boundary == Boundary::open) {
        v["mbhva_measurements"] = 46 * n * (n - 1) * depth;
        v["naive_translation_measurements"] = 94 * n * (n - 1) * depth;
      }
      break;
    case ModelKind::hubbard:
      if (n == 3 && m.boundary == Boundary::periodic) {
        v["mbhva_measurements"] = 131 * depth;
        v["cbhva_gates_pre_decomposition"] = 21 * depth;
        v["cbhva_native_single"] = 94 * depth;
        v["cbhva_native_two"] = 70 * depth;
      }
      break;
    case ModelKind::tfim: break;
  }
  v["peak_active_qubits"] = m.n_qubits() + 1;
  return v;
}

inline Json cmd_resources(const RunConfig& rc, const fs::path& out) {
  const ExperimentConfig& x = rc.experiment;
  const ModelSpec& m = x.model;
  const CircuitIR cbhva = build_cbhva(m, x.depth, {x.share_parameters});
  const PatternIR mbhva = compile_mbhva(m, x.depth, {x.share_parameters});
  const CircuitIR native = decompose_native(cbhva);
  const NaiveCostTable table;
  const PatternIR naive = translate_circuit_naive(native, table);
  const ResourceReport pre = count_circuit_resources(cbhva);
  const ResourceReport nat = count_circuit_resources(native);
  const ResourceReport mb = count_pattern_resources(mbhva);

  Json measured{{"mbhva_measurements", mb.measurements},
                {"cbhva_gates_pre_decomposition", pre.total_gates()},
                {"cbhva_native_single", nat.single_qubit_gates()},
                {"cbhva_native_two", nat.two_qubit_gates},
                {"naive_translation_measurements", count_pattern_resources(naive).measurements},
                {"parameters", mbhva.n_params},
                {"peak_active_qubits", peak_active_width(mbhva)}};

  const Json reference = reference_counts(m, x.depth);
  Json deviations = Json::array();
  for (const auto& [key, ref] : reference.items()) {
    const int got = measured.at(key).get<int>();
    if (got == ref.get<int>()) continue;
    Json d{{"field", key}, {"measured", got}, {"reference", ref}, {"difference", got - ref.get<int>()}};
    if (key == "cbhva_native_single")
      d["note"] = "native lowering with adjacent coaxial merging; the remaining single-qubit rotations sit between "
                  "non-commuting neighbours and do not merge";
    deviations.push_back(std::move(d));
  }

  Json cost = Json::object();
  for (const auto& [k, c] : table.fragment_costs()) cost[k] = c;

  const Ansatz a = make_ansatz(m, x.ansatz, x.depth, x.share_parameters);
  const ResourceReport ar = count_pattern_resources(a.pattern);

  Json j = measured;
  j["mbhva_nodes"] = resources_to_json(mb).at("nodes");
  j["cbhva_pre_decomposition"] = resources_to_json(pre);
  j["cbhva_native"] = resources_to_json(nat);
  j["paper_formula_values"] = reference;
  j["deviations"] = deviations;
  j["naive_cost_table"] = {{"fuse_single_qubit_runs", table.fuse_single_qubit_runs},
                           {"diagonal_runs_via_ancilla", table.diagonal_runs_via_ancilla},
                           {"fragment_measurements", cost}};
  j["configured_ansatz"] = {{"kind", to_string(x.ansatz)},
                            {"measurements", ar.measurements},
                            {"qubits", ar.qubits},
                            {"edges", ar.edges},
                            {"parameters", a.n_params()},
                            {"peak_active_qubits", peak_active_width(a.pattern)}};
  j["config"] = resolved_config_json(rc);
  detail::write_json(out / "resources.json", j);
  return j;
}

// ---- ed -------------------------------------------------------------------

inline Json ground_state_json(const GroundStateResult& g) {
  return Json{{"energy", g.energy}, {"iterations", g.iterations}, {"residual", g.residual}};
}

inline Json cmd_ed(const RunConfig& rc, const fs::path& out) {
  const Hamiltonian h = build_hamiltonian(rc.experiment.model);
  Json j = ground_state_json(exact_ground_energy(h));
  j["n_qubits"] = h.n_qubits();
  j["config"] = resolved_config_json(rc);
  detail::write_json(out / "baseline.json", j);
  return j;
}

// ---- equiv ----------------------------------------------------------------

/// Compares circuit simulation with pattern execution on random parameter
/// vectors. The MBQC side runs forced-zero unless the config asks for
/// sampled outcomes.
inline Json cmd_equiv(const RunConfig& rc, const fs::path& out) {
  const ExperimentConfig& x = rc.experiment;
  const Ansatz a = make_ansatz(x.model, x.ansatz, x.depth, x.share_parameters);
  const bool sampled = x.backend == BackendKind::mbqc_sampled;
  Json vectors = Json::array();
  double worst = 0.0;
  for (int r = 0; r < rc.equiv_vectors; ++r) {
    const std::uint64_t seed = restart_seed(x.seed, r);
    const std::vector<double> p = initial_parameters(a.n_params(), seed);
    const StateVector ref = simulate_circuit(a.circuit, p, a.input);
    const ExecutionOptions opt = sampled ? ExecutionOptions::sampled(step_backend_seed(seed, 0))
                                         : ExecutionOptions::forced_zero();
    const ExecutionResult got = execute_pattern(a.pattern, p, a.input, opt);
    const double dev = 1.0 - std::abs(inner_product(ref, got.state));
    worst = std::max(worst, dev);
    vectors.push_back({{"index", r}, {"seed", seed}, {"deviation", dev}, {"max_outcome_bias", got.max_outcome_bias}});
  }
  Json j{{"mode", sampled ? "sampled" : "forced_zero"},
         {"vectors", rc.equiv_vectors},
         {"tol", rc.equiv_tol},
         {"max_deviation", worst},
         {"pass", worst <= rc.equiv_tol},
         {"per_vector", vectors},
         {"config", resolved_config_json(rc)}};
  detail::write_json(out / "equiv.json", j);
  return j;
}

// ---- run ------------------------------------------------------------------

inline std::string runs_csv(const ExperimentResult& res) {
  std::string s = "run_id,step,energy,variance,vscore\n";
  for (const auto& run : res.runs)
    for (const auto& st : run.steps) {
      s += std::to_string(run.run_id) + "," + std::to_string(st.step) + "," + detail::fmt17(st.energy) + "," +
           detail::fmt17(st.variance) + "," + (std::isfinite(st.vscore) ? detail::fmt17(st.vscore) : "") + "\n";
    }
  return s;
}

inline Json step_stats_json(const StepStats& s) {
  using detail::number_or_null;
  return Json{{"step", s.step},
              {"runs", s.runs},
              {"mean_energy", s.mean_energy},
              {"min_energy", s.min_energy},
              {"max_energy", s.max_energy},
              {"var_energy", s.var_energy},
              {"vscore_runs", s.vscore_runs},
              {"mean_vscore", number_or_null(s.mean_vscore)},
              {"min_vscore", number_or_null(s.min_vscore)},
              {"max_vscore", number_or_null(s.max_vscore)},
              {"var_vscore", number_or_null(s.var_vscore)}};
}

/// Re-executes the final parameters of a run on its MBQC backend and records
/// the measurement outcomes.
inline Json run_outcomes_json(const ExperimentConfig& x, const Ansatz& a, const RunRecord& run) {
  const int step = run.steps.back().step;
  const std::uint64_t seed = step_backend_seed(run.seed, step);
  const bool sampled = x.backend == BackendKind::mbqc_sampled;
  const ExecutionResult r = execute_pattern(a.pattern, run.final_params, a.input,
                                            sampled ? ExecutionOptions::sampled(seed) : ExecutionOptions::forced_zero());
  Json outcomes = Json::array();
  for (const auto& [q, s] : r.outcomes) outcomes.push_back({q, s});
  Json j{{"run_id", run.run_id}, {"step", step}, {"mode", to_string(x.backend)}};
  if (sampled) j["seed"] = seed;
  j["max_outcome_bias"] = r.max_outcome_bias;
  j["outcomes"] = outcomes;
  return j;
}

inline Json cmd_run(const RunConfig& rc, const fs::path& out, const ProgressCallback& progress = {}) {
  const ExperimentConfig& x = rc.experiment;
  const Ansatz a = make_ansatz(x.model, x.ansatz, x.depth, x.share_parameters);
  const ExperimentResult res = run_experiment(x, progress);
  detail::write_text(out / "runs.csv", runs_csv(res));

  Json ed;
  try {
    ed = ground_state_json(exact_ground_energy(build_hamiltonian(x.model)));
  } catch (const CapacityError& e) {
    ed = Json{{"energy", nullptr}, {"reason", e.what()}};
  }

  Json runs = Json::array(), seeds = Json::array();
  for (const auto& run : res.runs) {
    seeds.push_back(run.seed);
    const StepRecord& last = run.steps.back();
    runs.push_back({{"run_id", run.run_id},
                    {"seed", run.seed},
                    {"plateaued", run.plateaued},
                    {"final_energy", last.energy},
                    {"final_variance", last.variance},
                    {"final_vscore", detail::number_or_null(last.vscore)},
                    {"initial_params", run.initial_params},
                    {"final_params", run.final_params}});
  }
  Json steps = Json::array();
  for (const auto& s : res.stats) steps.push_back(step_stats_json(s));
  const std::vector<StepStats> kept = aggregate_runs(res.runs, true);

  Json j{{"format", "mbvqe-summary"},
         {"version", 1},
         {"config", resolved_config_json(rc)},
         {"ansatz",
          {{"kind", to_string(x.ansatz)},
           {"n_qubits", a.n_qubits()},
           {"n_params", a.n_params()},
           {"measurements", count_pattern_resources(a.pattern).measurements}}},
         {"seeds", {{"master", x.seed}, {"runs", seeds}}},
         {"ed_baseline", ed},
         {"final", step_stats_json(res.stats.back())},
         {"final_excluding_plateaued", kept.empty() || kept.back().runs == 0 ? Json(nullptr)
                                                                              : step_stats_json(kept.back())},
         {"runs", runs},
         {"steps", steps}};
  detail::write_json(out / "summary.json", j);

  if (x.backend != BackendKind::circuit)
    for (const auto& run : res.runs)
      detail::write_json(out / ("outcomes_run" + std::to_string(run.run_id) + ".json"), run_outcomes_json(x, a, run));
  return j;
}

}  // namespace mbvqe
