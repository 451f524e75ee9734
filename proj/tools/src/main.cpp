#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdflow/cli/config.hpp"
#include "sdflow/cli/experiments.hpp"
#include "sdflow/errors.hpp"
#include "sdflow/linearization.hpp"

namespace {

int report_run(const sdflow::cli::ExperimentResult& result) {
  const auto& s = result.summary;
  std::cout << result.name << ": " << s.value("termination", "") << " at t = "
            << s.value("t_final", 0.0) << " (" << s.value("steps", 0) << " steps), output in "
            << result.output_dir << "\n";
  if (s.contains("fitted_rate") && s["fitted_rate"].is_number()) {
    std::cout << "  fitted rate " << s["fitted_rate"].get<double>();
    if (s.contains("expected_rate")) std::cout << ", expected " << s["expected_rate"].get<double>();
    std::cout << "\n";
  }
  if (!result.record) return 0;
  if (result.record->termination != sdflow::Termination::completed) {
    std::cerr << "early termination: " << result.record->diagnosis << "\n";
  }
  return sdflow::cli::exit_code(*result.record);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sdflow: surface diffusion flow over a cylinder"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "run a configuration file; --key=value flags override it");
  std::string config_path;
  simulate->add_option("config", config_path, "configuration file")->required();
  simulate->allow_extras();

  auto* experiment = app.add_subcommand("experiment", "run a named experiment");
  std::string experiment_name;
  experiment->add_option("name", experiment_name, "experiment name")
      ->required()
      ->check(CLI::IsMember(sdflow::cli::experiment_names()));
  experiment->allow_extras();

  auto* dispersion = app.add_subcommand("dispersion", "linear growth rates of the cylinder");
  double disp_r = 1.0;
  int kmax = 8, mmax = 8;
  std::string format = "csv";
  dispersion->add_option("--r", disp_r, "cylinder radius")->required()->check(CLI::PositiveNumber);
  dispersion->add_option("--kmax", kmax, "axial cutoff")->required();
  dispersion->add_option("--mmax", mmax, "azimuthal cutoff")->required();
  dispersion->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  app.add_subcommand("ledger", "criticality ledger as JSON");

  auto* norms = app.add_subcommand("norms", "discrete Holder norms of a snapshot");
  std::string snapshot_path;
  double alpha = 0.5;
  norms->add_option("snapshot", snapshot_path, "snapshot file")->required();
  norms->add_option("--alpha", alpha, "Holder exponent")->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*simulate) {
      const auto flags = sdflow::cli::parse_flags(simulate->remaining());
      return report_run(sdflow::cli::simulate(sdflow::cli::parse_config(config_path, flags)));
    }
    if (*experiment) {
      const auto flags = sdflow::cli::parse_flags(experiment->remaining());
      const auto result = sdflow::cli::run_experiment(experiment_name, flags);
      if (!result.record) {
        std::cout << result.summary.dump(2) << "\n";
        return 0;
      }
      return report_run(result);
    }
    if (*dispersion) {
      if (format == "json") {
        std::cout << sdflow::cli::dispersion_json(disp_r, kmax, mmax).dump(2) << "\n";
      } else {
        sdflow::write_csv(std::cout, sdflow::classify_stability(disp_r, kmax, mmax));
      }
      return 0;
    }
    if (app.got_subcommand("ledger")) {
      std::cout << sdflow::cli::ledger_json().dump(2) << "\n";
      return 0;
    }
    if (*norms) {
      const sdflow::Field h = sdflow::read_snapshot(snapshot_path);
      std::cout << sdflow::cli::norms_json(h, alpha).dump(2) << "\n";
      return 0;
    }
  } catch (const sdflow::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const sdflow::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 1;
  } catch (const sdflow::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
