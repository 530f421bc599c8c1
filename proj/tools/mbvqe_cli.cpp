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

#include <CLI11.hpp>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include "mbvqe/commands.hpp"

using namespace mbvqe;

namespace {

struct Invocation {
  std::string config_path;
  std::string out_dir;
  bool quiet = false;
};

int dispatch(const std::string& name, const Invocation& inv) {
  RunConfig rc = load_config_file(inv.config_path);
  if (!inv.out_dir.empty()) rc.output_directory = inv.out_dir;
  const fs::path out(rc.output_directory);
  fs::create_directories(out);

  if (name == "compile") {
    const Json j = cmd_compile(rc, out);
    std::printf("pattern: %zu measurements, %d parameters -> %s\n", j.at("commands").size(),
                j.at("n_params").get<int>(), (out / "pattern.json").string().c_str());
  } else if (name == "resources") {
    const Json j = cmd_resources(rc, out);
    std::printf("mbhva %d, naive %d, native %d+%d, deviations %zu -> %s\n", j.at("mbhva_measurements").get<int>(),
                j.at("naive_translation_measurements").get<int>(), j.at("cbhva_native_single").get<int>(),
                j.at("cbhva_native_two").get<int>(), j.at("deviations").size(),
                (out / "resources.json").string().c_str());
  } else if (name == "ed") {
    const Json j = cmd_ed(rc, out);
    std::printf("ground energy %.12f (%d iterations, residual %.3g)\n", j.at("energy").get<double>(),
                j.at("iterations").get<int>(), j.at("residual").get<double>());
  } else if (name == "equiv") {
    const Json j = cmd_equiv(rc, out);
    const bool pass = j.at("pass").get<bool>();
    std::printf("%s: max 1-|<a|b>| = %.3e over %d vectors (tol %.1e)\n", pass ? "pass" : "FAIL",
                j.at("max_deviation").get<double>(), rc.equiv_vectors, rc.equiv_tol);
    if (!pass) return kExitFailure;
  } else {
    const int steps = rc.experiment.steps;
    ProgressCallback progress;
    if (!inv.quiet)
      progress = [steps](int run, int step, const StepRecord& s) {
        if (step % 10 == 0 || step == steps)
          std::fprintf(stderr, "run %d step %d energy %.8f vscore %.5g\n", run, step, s.energy, s.vscore);
      };
    const Json j = cmd_run(rc, out, progress);
    const Json& f = j.at("final");
    std::printf("step %d: mean energy %.8f, min %.8f, mean vscore %s -> %s\n", f.at("step").get<int>(),
                f.at("mean_energy").get<double>(), f.at("min_energy").get<double>(), f.at("mean_vscore").dump().c_str(),
                (out / "summary.json").string().c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-based variational eigensolver toolkit"};
  app.require_subcommand(1);
  Invocation inv;
  const std::pair<const char*, const char*> subs[] = {
      {"compile", "compile the configured ansatz to a measurement pattern (pattern.json, pattern.dot)"},
      {"resources", "count measurements and gates (resources.json)"},
      {"run", "optimize with Adam over restarts (runs.csv, summary.json)"},
      {"ed", "exact ground energy of the configured model (baseline.json)"},
      {"equiv", "compare circuit and pattern output states (equiv.json)"}};
  for (const auto& [name, help] : subs) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--config", inv.config_path, "run configuration (JSON)")->required();
    s->add_option("--out", inv.out_dir, "output directory; overrides output.directory");
    if (std::string(name) == "run") s->add_flag("-q,--quiet", inv.quiet, "no progress on stderr");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    return dispatch(app.get_subcommands().front()->get_name(), inv);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    std::cerr << "numerical: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const UndefinedVScore& e) {
    std::cerr << "numerical: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
