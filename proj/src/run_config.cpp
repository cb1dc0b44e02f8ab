#include "wkfilter/run_config.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>

#include "wkfilter/errors.hpp"
#include "wkfilter/factorization.hpp"
#include "wkfilter/rng.hpp"

namespace wkf::cli {

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError(what + ": complex values are [re, im] pairs");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json complex_list(const std::vector<Complex>& values, std::size_t limit) {
  json out = json::array();
  for (std::size_t k = 0; k < values.size() && k < limit; ++k) {
    out.push_back(complex_to_json(values[k]));
  }
  return out;
}

SpectralDensity density_from_json(const json& j, const std::string& role) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ValidationError(role + ": density spec needs a \"kind\" field");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ma") {
    if (!j.contains("coeffs") || !j.at("coeffs").is_array() || j.at("coeffs").empty()) {
      throw ValidationError(role + ": moving-average density needs \"coeffs\"");
    }
    std::vector<Complex> coeffs;
    for (const auto& c : j.at("coeffs")) {
      coeffs.push_back(complex_from_json(c, role + ".coeffs"));
    }
    return SpectralDensity::moving_average(std::move(coeffs));
  }
  if (kind == "grid") {
    std::vector<double> samples;
    if (j.contains("samples")) {
      samples = j.at("samples").get<std::vector<double>>();
    } else if (j.contains("file")) {
      std::ifstream in(j.at("file").get<std::string>());
      if (!in) {
        throw ValidationError(role + ": cannot open sample file " +
                              j.at("file").get<std::string>());
      }
      double value;
      while (in >> value) samples.push_back(value);
    } else {
      throw ValidationError(role + ": grid density needs \"samples\" or \"file\"");
    }
    Eigen::ArrayXd arr(static_cast<int>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) arr[static_cast<int>(i)] = samples[i];
    return SpectralDensity::from_samples(arr);
  }
  if (kind == "constant") {
    if (!j.contains("value")) throw ValidationError(role + ": constant density needs \"value\"");
    const double value = j.at("value").get<double>();
    if (value < 0.0) throw ValidationError(role + ": constant density must be nonnegative");
    return SpectralDensity::moving_average({Complex(std::sqrt(value), 0.0)});
  }
  throw ValidationError(role + ": unknown density kind \"" + kind + "\"");
}

json density_to_json(const SpectralDensity& d) {
  json out;
  if (d.kind() == DensityKind::MovingAverage) {
    out["kind"] = "ma";
    out["coeffs"] = complex_list(d.ma_coeffs(), d.ma_coeffs().size());
  } else {
    out["kind"] = "grid";
    out["size"] = d.samples().size();
  }
  return out;
}

void write_csv(const std::string& path, const std::string& header,
               const std::function<void(std::ofstream&)>& body) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write CSV file " + path);
  out << header << "\n";
  out.precision(17);
  body(out);
}

void write_series_csv(const std::string& path, const std::vector<Complex>& values,
                      const std::string& index_name) {
  write_csv(path, index_name + ",re,im", [&](std::ofstream& out) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      out << k << "," << values[k].real() << "," << values[k].imag() << "\n";
    }
  });
}

void write_grid_csv(const std::string& path, const Eigen::ArrayXd& lambda,
                    const std::vector<std::pair<std::string, const Eigen::ArrayXd*>>& cols) {
  std::string header = "lambda";
  for (const auto& [name, _] : cols) header += "," + name;
  write_csv(path, header, [&](std::ofstream& out) {
    for (int j = 0; j < lambda.size(); ++j) {
      out << lambda[j];
      for (const auto& [_, col] : cols) out << "," << (*col)[j];
      out << "\n";
    }
  });
}

json diagnostics_to_json(const FilterDiagnostics& d) {
  json out;
  out["truncation"] = d.truncation;
  out["grid"] = d.grid;
  out["solve_residual"] = d.solve_residual;
  out["condition_estimate"] = d.condition_estimate;
  out["causality_defect"] = d.causality_defect;
  out["orthogonality_defect"] = d.orthogonality_defect;
  out["weight_tail_mass"] = d.weight_tail_mass;
  out["minimality_integral"] = d.minimality_integral;
  out["used_least_squares"] = d.used_least_squares;
  out["warnings"] = d.warnings;
  return out;
}

json solution_to_json(const FilterSolution& sol, std::size_t weight_limit = 16) {
  json out;
  out["mse"] = sol.mse;
  out["weights_head"] = complex_list(sol.w, weight_limit);
  out["weight_count"] = sol.w.size();
  return out;
}

void write_solution_csv(const FilterSolution& sol, const RunConfig& config,
                        const std::string& prefix) {
  write_series_csv(prefix + "_weights.csv", sol.w, "k");
  const Eigen::ArrayXd lambda = frequency_grid(sol.diagnostics.grid);
  write_csv(prefix + "_characteristic.csv", "lambda,re,im", [&](std::ofstream& out) {
    for (int j = 0; j < lambda.size(); ++j) {
      out << lambda[j] << "," << sol.h[j].real() << "," << sol.h[j].imag() << "\n";
    }
  });
  const Eigen::ArrayXd f = config.signal.evaluate(sol.diagnostics.grid);
  const Eigen::ArrayXd g = config.noise.evaluate(sol.diagnostics.grid);
  write_grid_csv(prefix + "_densities.csv", lambda, {{"f", &f}, {"g", &g}});
}

MinimaxOptions minimax_options(const RunConfig& config) {
  MinimaxOptions opts;
  opts.truncation = config.truncation;
  opts.grid = config.grid;
  opts.tol = config.tolerances.fixed_point;
  return opts;
}

DensityClass class_from_spec(const MinimaxClassSpec& spec, int grid) {
  if (spec.variant == "power") return PowerPairClass{spec.P1, spec.P2};
  if (spec.variant == "joint") return JointMinimalClass{spec.P0};
  if (spec.variant == "band") {
    if (!spec.v || !spec.u || !spec.g1) {
      throw ValidationError("band class needs v, u and g1 density specs");
    }
    BandContaminationClass band;
    band.v = spec.v->evaluate(grid);
    band.u = spec.u->evaluate(grid);
    band.g1 = spec.g1->evaluate(grid);
    band.P1 = spec.P1;
    band.P2 = spec.P2;
    band.eps = spec.eps;
    return band;
  }
  throw ValidationError("unknown minimax class \"" + spec.variant + "\"");
}

json residuals_to_json(const MinimaxResiduals& r) {
  json out;
  out["eq_f"] = r.eq_f;
  out["eq_g"] = r.eq_g;
  out["power_f"] = r.power_f;
  out["power_g"] = r.power_g;
  out["comp_slack"] = r.comp_slack;
  out["delta_identity"] = r.delta_identity;
  return out;
}

}  // namespace

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config root must be an object");
  RunConfig config;
  if (!doc.contains("signal") || !doc.contains("noise")) {
    throw ValidationError("config needs exactly one \"signal\" and one \"noise\" density spec");
  }
  config.signal = density_from_json(doc.at("signal"), "signal");
  config.noise = density_from_json(doc.at("noise"), "noise");

  if (doc.contains("functional")) {
    const json& fj = doc.at("functional");
    if (!fj.contains("coeffs")) throw ValidationError("functional needs \"coeffs\"");
    for (const auto& c : fj.at("coeffs")) {
      config.functional.coeffs.push_back(complex_from_json(c, "functional.coeffs"));
    }
    config.functional.declared_tail = fj.value("declared_tail", 0.0);
  } else {
    config.functional.coeffs = {Complex(1.0, 0.0)};
  }
  config.functional.validate();

  config.truncation = doc.value("truncation", 64);
  config.grid = doc.value("grid", 4096);
  if (config.truncation < 1) throw ValidationError("truncation must be positive");
  if (!is_power_of_two(config.grid) || config.grid < 16) {
    throw ValidationError("grid must be a power of two >= 16");
  }

  if (doc.contains("tolerances")) {
    const json& tj = doc.at("tolerances");
    config.tolerances.solve = tj.value("solve", config.tolerances.solve);
    config.tolerances.minimality = tj.value("minimality", config.tolerances.minimality);
    config.tolerances.factorization = tj.value("factorization", config.tolerances.factorization);
    config.tolerances.fixed_point = tj.value("fixed_point", config.tolerances.fixed_point);
  }

  if (doc.contains("minimax")) {
    const json& mj = doc.at("minimax");
    MinimaxClassSpec spec;
    spec.variant = mj.value("class", "power");
    spec.P0 = mj.value("P0", 1.0);
    spec.P1 = mj.value("P1", 1.0);
    spec.P2 = mj.value("P2", 1.0);
    spec.eps = mj.value("eps", 0.0);
    if (mj.contains("v")) spec.v = density_from_json(mj.at("v"), "minimax.v");
    if (mj.contains("u")) spec.u = density_from_json(mj.at("u"), "minimax.u");
    if (mj.contains("g1")) spec.g1 = density_from_json(mj.at("g1"), "minimax.g1");
    config.minimax = std::move(spec);
  }

  if (doc.contains("simulation")) {
    const json& sj = doc.at("simulation");
    config.simulation.n = sj.value("n", config.simulation.n);
    config.simulation.paths = sj.value("paths", config.simulation.paths);
    config.simulation.seed = sj.value("seed", config.simulation.seed);
    if (config.simulation.n <= 0 || config.simulation.paths <= 1) {
      throw ValidationError("simulation needs n > 0 and paths > 1");
    }
  }

  config.config_hash = fnv1a_hex(doc.dump());
  return config;
}

RunConfig load_config(const std::string& path) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (!fs::exists(p) && p.is_relative()) {
    if (const char* dir = std::getenv("WKFILTER_CONFIG_DIR")) {
      const fs::path candidate = fs::path(dir) / p;
      if (fs::exists(candidate)) p = candidate;
    }
  }
  std::ifstream in(p);
  if (!in) throw ValidationError("cannot open config file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

json error_record(const Error& error) {
  const char* category = "validation";
  switch (error.category()) {
    case Error::Category::Validation: category = "validation"; break;
    case Error::Category::Minimality: category = "minimality"; break;
    case Error::Category::NonConvergence: category = "nonconvergence"; break;
    case Error::Category::Singular: category = "singular"; break;
  }
  json record;
  record["error"] = {{"exit_code", error.exit_code()},
                     {"category", category},
                     {"message", error.what()}};
  return record;
}

CommandResult run_command(const std::string& command, const RunConfig& config,
                          const CommandOptions& options) {
  json doc;
  doc["command"] = command;
  doc["config_hash"] = config.config_hash;
  doc["tolerances"] = {{"solve", config.tolerances.solve},
                       {"minimality", config.tolerances.minimality},
                       {"factorization", config.tolerances.factorization},
                       {"fixed_point", config.tolerances.fixed_point}};
  doc["parameters"] = {{"truncation", config.truncation},
                       {"grid", config.grid},
                       {"signal", density_to_json(config.signal)},
                       {"noise", density_to_json(config.noise)}};

  const int L = config.truncation;
  const int G = config.grid;

  if (command == "filter" || command == "mse") {
    const FilterSolution sol =
        solve_filter_finite(config.signal, config.noise, config.functional, L, G);
    doc["result"] = solution_to_json(sol);
    const MseBreakdown breakdown =
        mse_breakdown(config.signal, config.noise, config.functional, sol);
    doc["result"]["mse_integral"] = breakdown.integral;
    doc["result"]["mse_gap"] = breakdown.gap;
    doc["diagnostics"] = diagnostics_to_json(sol.diagnostics);
    if (options.csv_prefix) write_solution_csv(sol, config, *options.csv_prefix);
  } else if (command == "smooth") {
    const FilterSolution sol = smoothing(config.signal, config.noise, L, G);
    doc["result"] = solution_to_json(sol);
    doc["diagnostics"] = diagnostics_to_json(sol.diagnostics);
    if (options.csv_prefix) write_solution_csv(sol, config, *options.csv_prefix);
  } else if (command == "point") {
    const FilterSolution sol = estimate_point(config.signal, config.noise, options.point, L, G);
    doc["result"] = solution_to_json(sol);
    doc["result"]["p"] = options.point;
    doc["diagnostics"] = diagnostics_to_json(sol.diagnostics);
    if (options.csv_prefix) write_solution_csv(sol, config, *options.csv_prefix);
  } else if (command == "factorize") {
    const Eigen::ArrayXd f = config.signal.evaluate(G);
    const Eigen::ArrayXd g = config.noise.evaluate(G);
    const Eigen::ArrayXd s = f + g;
    Eigen::ArrayXd inv_s(G);
    for (int j = 0; j < G; ++j) inv_s[j] = 1.0 / s[j];
    const double tol = config.tolerances.factorization;
    const FactorCoeffs theta = spectral_factorize(s, L, tol, "f+g");
    const FactorCoeffs psi = spectral_factorize(inv_s, L, tol, "1/(f+g)");
    json result;
    const auto factor_json = [](const FactorCoeffs& fc) {
      json out;
      out["coeffs_head"] = complex_list(fc.h, 16);
      out["length"] = fc.h.size();
      out["reconstruction_error"] = fc.reconstruction_error;
      out["tail_mass"] = fc.tail_mass;
      return out;
    };
    result["theta"] = factor_json(theta);
    result["psi"] = factor_json(psi);
    if ((f > 0.0).all()) {
      const FactorCoeffs phi = spectral_factorize(f, L, tol, "f");
      result["phi"] = factor_json(phi);
      result["upsilon"] = factor_json(factor_product(psi, phi));
    }
    doc["result"] = result;
    if (options.csv_prefix) {
      write_series_csv(*options.csv_prefix + "_theta.csv", theta.h, "k");
      write_series_csv(*options.csv_prefix + "_psi.csv", psi.h, "k");
    }
  } else if (command == "minimax") {
    if (!config.minimax && options.minimax_class.empty()) {
      throw ValidationError("minimax command needs a class (config or --class)");
    }
    MinimaxClassSpec spec = config.minimax.value_or(MinimaxClassSpec{});
    if (!options.minimax_class.empty()) spec.variant = options.minimax_class;
    const DensityClass cls = class_from_spec(spec, G);
    const MinimaxOptions opts = minimax_options(config);
    MinimaxSolution sol;
    if (std::holds_alternative<PowerPairClass>(cls)) {
      sol = least_favorable_power(std::get<PowerPairClass>(cls), config.functional, opts);
    } else if (std::holds_alternative<JointMinimalClass>(cls)) {
      sol = least_favorable_joint(std::get<JointMinimalClass>(cls), config.functional, opts);
    } else {
      sol = least_favorable_band_eps(std::get<BandContaminationClass>(cls),
                                     config.functional, opts);
    }
    json result;
    result["delta0"] = sol.delta0;
    result["alpha1"] = sol.alpha1;
    result["alpha2"] = sol.alpha2;
    result["beta1"] = sol.beta1;
    result["beta2"] = sol.beta2;
    result["iterations"] = sol.iterations;
    result["class"] = spec.variant;
    doc["result"] = result;
    doc["diagnostics"] = residuals_to_json(sol.residuals);
    if (options.csv_prefix) {
      const Eigen::ArrayXd lambda = frequency_grid(G);
      write_grid_csv(*options.csv_prefix + "_densities.csv", lambda,
                     {{"f0", &sol.f0}, {"g0", &sol.g0}});
      write_series_csv(*options.csv_prefix + "_weights.csv", sol.filter.w, "k");
    }
  } else if (command == "simulate") {
    if (config.signal.kind() != DensityKind::MovingAverage ||
        config.noise.kind() != DensityKind::MovingAverage) {
      throw ValidationError("simulate needs moving-average signal and noise specs");
    }
    const auto real_coeffs = [](const std::vector<Complex>& c, const std::string& role) {
      std::vector<double> out;
      for (const Complex& z : c) {
        if (z.imag() != 0.0) {
          throw ValidationError(role + ": simulation supports real coefficients only");
        }
        out.push_back(z.real());
      }
      return out;
    };
    const std::vector<double> bf = real_coeffs(config.signal.ma_coeffs(), "signal");
    const std::vector<double> bg = real_coeffs(config.noise.ma_coeffs(), "noise");
    const SamplePath xi = simulate_ma(bf, config.simulation.n, config.simulation.seed);
    const SamplePath eta = simulate_ma(bg, config.simulation.n,
                                       SplitMix64::derive(config.simulation.seed, 1));
    const auto acov = [](const std::vector<double>& x, int lag) {
      double acc = 0.0;
      for (std::size_t t = 0; t + static_cast<std::size_t>(lag) < x.size(); ++t) {
        acc += x[t] * x[t + static_cast<std::size_t>(lag)];
      }
      return acc / static_cast<double>(x.size() - static_cast<std::size_t>(lag));
    };
    json result;
    result["n"] = config.simulation.n;
    result["seed"] = config.simulation.seed;
    result["signal_acov0"] = acov(xi.values, 0);
    result["signal_acov1"] = acov(xi.values, 1);
    result["noise_acov0"] = acov(eta.values, 0);
    result["noise_acov1"] = acov(eta.values, 1);
    doc["result"] = result;
    if (options.csv_prefix) {
      write_csv(*options.csv_prefix + "_path.csv", "t,signal,noise,observation",
                [&](std::ofstream& out) {
                  for (int t = 0; t < config.simulation.n; ++t) {
                    const double x = xi.values[static_cast<std::size_t>(t)];
                    const double y = eta.values[static_cast<std::size_t>(t)];
                    out << -t << "," << x << "," << y << "," << (x + y) << "\n";
                  }
                });
    }
  } else if (command == "oracle") {
    if (options.oracle_mode == "toeplitz") {
      const ToeplitzProjection proj = toeplitz_projection(
          config.signal, config.noise, config.functional, options.window, G);
      json result;
      result["mse"] = proj.mse;
      result["window"] = options.window;
      result["weights_head"] = complex_list(proj.w, 16);
      doc["result"] = result;
      if (options.csv_prefix) {
        write_series_csv(*options.csv_prefix + "_weights.csv", proj.w, "k");
      }
    } else if (options.oracle_mode == "gridmax") {
      if (!config.minimax && options.minimax_class.empty()) {
        throw ValidationError("oracle gridmax needs a minimax class");
      }
      MinimaxClassSpec spec = config.minimax.value_or(MinimaxClassSpec{});
      if (!options.minimax_class.empty()) spec.variant = options.minimax_class;
      GridMaxParams params;
      params.nodes = options.nodes;
      params.restarts = options.restarts;
      const DensityClass cls = class_from_spec(spec, params.grid);
      const GridMaxResult best =
          grid_maximize_delta(cls, config.functional, params, config.simulation.seed);
      json result;
      result["delta"] = best.delta;
      result["evaluations"] = best.evaluations;
      result["restart_bests"] = best.restart_bests;
      doc["result"] = result;
      if (options.csv_prefix) {
        const Eigen::ArrayXd lambda = frequency_grid(params.grid);
        write_grid_csv(*options.csv_prefix + "_densities.csv", lambda,
                       {{"f", &best.f}, {"g", &best.g}});
      }
    } else {
      throw ValidationError("oracle mode must be toeplitz or gridmax");
    }
  } else {
    throw ValidationError("unknown command \"" + command + "\"");
  }

  const auto now = std::chrono::system_clock::now();
  doc["meta"] = {{"timestamp", std::chrono::duration_cast<std::chrono::seconds>(
                                   now.time_since_epoch())
                                   .count()},
                 {"tool", "wkfilter"}};
  return CommandResult{doc, 0};
}

}  // namespace wkf::cli
