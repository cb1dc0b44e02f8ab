#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "wkfilter/run_config.hpp"

namespace {

int execute(const std::string& command, const std::string& config_path,
            const wkf::cli::CommandOptions& options,
            const std::optional<std::string>& output_path) {
  try {
    const wkf::cli::RunConfig config = wkf::cli::load_config(config_path);
    const wkf::cli::CommandResult result =
        wkf::cli::run_command(command, config, options);
    const std::string text = result.document.dump(2);
    if (output_path) {
      std::ofstream out(*output_path);
      if (!out) {
        throw wkf::ValidationError("cannot write output file " + *output_path);
      }
      out << text << "\n";
    } else {
      std::cout << text << "\n";
    }
    return result.exit_code;
  } catch (const wkf::Error& e) {
    std::cerr << wkf::cli::error_record(e).dump() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << R"({"error":{"exit_code":1,"category":"validation","message":")"
              << e.what() << R"("}})" << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-square optimal and minimax-robust filtering of functionals "
               "of stationary sequences observed in noise"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> output_path;
  wkf::cli::CommandOptions options;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file")->required();
    cmd->add_option("-o,--output", output_path, "write the JSON result here");
    cmd->add_option("--csv-prefix", options.csv_prefix,
                    "also write CSV series with this path prefix");
  };

  add_common(app.add_subcommand("filter", "optimal filter for the configured functional"));
  add_common(app.add_subcommand("smooth", "estimate the current signal value"));
  auto* point = app.add_subcommand("point", "estimate the signal value at time p <= 0");
  add_common(point);
  point->add_option("--p", options.point, "time of the value to estimate (<= 0)");
  add_common(app.add_subcommand("factorize", "canonical factorizations of the spectra"));
  add_common(app.add_subcommand("mse", "mean-square error with both formula routes"));
  auto* minimax = app.add_subcommand("minimax", "least favorable pair and robust filter");
  add_common(minimax);
  minimax->add_option("--class", options.minimax_class, "power | joint | band");
  add_common(app.add_subcommand("simulate", "seeded sample paths of signal and noise"));
  auto* oracle = app.add_subcommand("oracle", "independent verification runs");
  add_common(oracle);
  oracle->add_option("mode", options.oracle_mode, "toeplitz | gridmax")->required();
  oracle->add_option("--M", options.window, "observation window for the toeplitz oracle");
  oracle->add_option("--nodes", options.nodes, "density nodes for gridmax");
  oracle->add_option("--restarts", options.restarts, "random restarts for gridmax");

  CLI11_PARSE(app, argc, argv);
  return execute(app.get_subcommands().front()->get_name(), config_path, options,
                 output_path);
}
