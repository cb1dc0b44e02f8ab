#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wkfilter/errors.hpp"
#include "wkfilter/factorization.hpp"
#include "wkfilter/filtering.hpp"
#include "wkfilter/minimax.hpp"
#include "wkfilter/oracle.hpp"

namespace py = pybind11;
using namespace wkf;

namespace {

SpectralDensity make_density(const py::object& spec) {
  if (py::isinstance<SpectralDensity>(spec)) return spec.cast<SpectralDensity>();
  if (py::isinstance<py::list>(spec) || py::isinstance<py::tuple>(spec)) {
    return SpectralDensity::moving_average(spec.cast<std::vector<Complex>>());
  }
  return SpectralDensity::from_samples(spec.cast<Eigen::ArrayXd>());
}

FunctionalSpec make_functional(const std::vector<Complex>& coeffs, double declared_tail) {
  FunctionalSpec a;
  a.coeffs = coeffs;
  a.declared_tail = declared_tail;
  a.validate();
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mean-square optimal and minimax-robust filtering of functionals of "
            "stationary sequences observed in additive noise";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<MinimalityError>(m, "MinimalityError", PyExc_ArithmeticError);
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_RuntimeError);

  py::class_<SpectralDensity>(m, "SpectralDensity")
      .def_static("moving_average", &SpectralDensity::moving_average, py::arg("coeffs"))
      .def_static("from_samples", &SpectralDensity::from_samples, py::arg("samples"))
      .def("evaluate", &SpectralDensity::evaluate, py::arg("grid_size"));

  py::class_<FourierSeries>(m, "FourierSeries")
      .def_readonly("max_lag", &FourierSeries::max_lag)
      .def_readonly("truncation_residual", &FourierSeries::truncation_residual)
      .def("at", &FourierSeries::at, py::arg("k"))
      .def("hermitian_defect", &FourierSeries::hermitian_defect);

  py::class_<MinimalityReport>(m, "MinimalityReport")
      .def_readonly("passes", &MinimalityReport::passes)
      .def_readonly("integral", &MinimalityReport::integral)
      .def_readonly("refined_integral", &MinimalityReport::refined_integral)
      .def_readonly("change", &MinimalityReport::change)
      .def_readonly("offending_frequency", &MinimalityReport::offending_frequency);

  py::class_<FactorCoeffs>(m, "FactorCoeffs")
      .def_readonly("h", &FactorCoeffs::h)
      .def_readonly("reconstruction_error", &FactorCoeffs::reconstruction_error)
      .def_readonly("tail_mass", &FactorCoeffs::tail_mass);

  py::class_<FilterDiagnostics>(m, "FilterDiagnostics")
      .def_readonly("truncation", &FilterDiagnostics::truncation)
      .def_readonly("grid", &FilterDiagnostics::grid)
      .def_readonly("solve_residual", &FilterDiagnostics::solve_residual)
      .def_readonly("condition_estimate", &FilterDiagnostics::condition_estimate)
      .def_readonly("causality_defect", &FilterDiagnostics::causality_defect)
      .def_readonly("orthogonality_defect", &FilterDiagnostics::orthogonality_defect)
      .def_readonly("weight_tail_mass", &FilterDiagnostics::weight_tail_mass)
      .def_readonly("used_least_squares", &FilterDiagnostics::used_least_squares)
      .def_readonly("warnings", &FilterDiagnostics::warnings);

  py::class_<FilterSolution>(m, "FilterSolution")
      .def_property_readonly("c",
                             [](const FilterSolution& s) { return s.c; })
      .def_property_readonly("h", [](const FilterSolution& s) { return s.h; })
      .def_readonly("w", &FilterSolution::w)
      .def_readonly("mse", &FilterSolution::mse)
      .def_readonly("diagnostics", &FilterSolution::diagnostics);

  m.def("evaluate_density",
        [](const py::object& d, int grid) { return make_density(d).evaluate(grid); },
        py::arg("density"), py::arg("grid_size"),
        "Samples of a density on the uniform grid over [-pi, pi)");
  m.def("fourier_coefficients",
        [](const Eigen::ArrayXd& samples, int max_lag) {
          return fourier_coefficients(samples, max_lag);
        },
        py::arg("samples"), py::arg("max_lag"));
  m.def("minimality_check",
        [](const py::object& f, const py::object& g, int grid, double tol) {
          return minimality_check(make_density(f), make_density(g), grid, tol);
        },
        py::arg("f"), py::arg("g"), py::arg("grid_size") = 4096, py::arg("tol") = 1e-6);

  m.def("spectral_factorize",
        [](const Eigen::ArrayXd& samples, int length, double tol) {
          return spectral_factorize(samples, length, tol);
        },
        py::arg("samples"), py::arg("length"), py::arg("tol") = 1e-8);
  m.def("factor_product", &factor_product, py::arg("lhs"), py::arg("rhs"));

  m.def("solve_filter",
        [](const py::object& f, const py::object& g, const std::vector<Complex>& a,
           int L, int G, double tail) {
          return solve_filter(make_density(f), make_density(g), make_functional(a, tail),
                              L, G);
        },
        py::arg("f"), py::arg("g"), py::arg("a"), py::arg("truncation") = 64,
        py::arg("grid_size") = 4096, py::arg("declared_tail") = 0.0);
  m.def("solve_filter_factorized",
        [](const py::object& f, const py::object& g, const std::vector<Complex>& a,
           int L, int G) {
          return solve_filter_factorized(make_density(f), make_density(g),
                                         make_functional(a, 0.0), L, G);
        },
        py::arg("f"), py::arg("g"), py::arg("a"), py::arg("truncation") = 64,
        py::arg("grid_size") = 4096);
  m.def("estimate_point",
        [](const py::object& f, const py::object& g, int p, int L, int G) {
          return estimate_point(make_density(f), make_density(g), p, L, G);
        },
        py::arg("f"), py::arg("g"), py::arg("p"), py::arg("truncation") = 64,
        py::arg("grid_size") = 4096);
  m.def("smoothing",
        [](const py::object& f, const py::object& g, int L, int G) {
          return smoothing(make_density(f), make_density(g), L, G);
        },
        py::arg("f"), py::arg("g"), py::arg("truncation") = 64,
        py::arg("grid_size") = 4096);
  m.def("mse",
        [](const py::object& f, const py::object& g, const std::vector<Complex>& a,
           const FilterSolution& sol) {
          return mse(make_density(f), make_density(g), make_functional(a, 0.0), sol);
        },
        py::arg("f"), py::arg("g"), py::arg("a"), py::arg("solution"));

  py::class_<PowerPairClass>(m, "PowerPairClass")
      .def(py::init<double, double>(), py::arg("P1"), py::arg("P2"))
      .def_readwrite("P1", &PowerPairClass::P1)
      .def_readwrite("P2", &PowerPairClass::P2);
  py::class_<JointMinimalClass>(m, "JointMinimalClass")
      .def(py::init<double>(), py::arg("P0"))
      .def_readwrite("P0", &JointMinimalClass::P0);
  py::class_<BandContaminationClass>(m, "BandContaminationClass")
      .def(py::init([](const Eigen::ArrayXd& v, const Eigen::ArrayXd& u, double P1,
                       const Eigen::ArrayXd& g1, double eps, double P2) {
             return BandContaminationClass{v, u, P1, g1, eps, P2};
           }),
           py::arg("v"), py::arg("u"), py::arg("P1"), py::arg("g1"), py::arg("eps"),
           py::arg("P2"));

  py::class_<MinimaxResiduals>(m, "MinimaxResiduals")
      .def_readonly("eq_f", &MinimaxResiduals::eq_f)
      .def_readonly("eq_g", &MinimaxResiduals::eq_g)
      .def_readonly("power_f", &MinimaxResiduals::power_f)
      .def_readonly("power_g", &MinimaxResiduals::power_g)
      .def_readonly("comp_slack", &MinimaxResiduals::comp_slack)
      .def_readonly("delta_identity", &MinimaxResiduals::delta_identity);

  py::class_<MinimaxSolution>(m, "MinimaxSolution")
      .def_property_readonly("f0", [](const MinimaxSolution& s) { return s.f0; })
      .def_property_readonly("g0", [](const MinimaxSolution& s) { return s.g0; })
      .def_readonly("alpha1", &MinimaxSolution::alpha1)
      .def_readonly("alpha2", &MinimaxSolution::alpha2)
      .def_readonly("beta1", &MinimaxSolution::beta1)
      .def_readonly("beta2", &MinimaxSolution::beta2)
      .def_readonly("delta0", &MinimaxSolution::delta0)
      .def_readonly("iterations", &MinimaxSolution::iterations)
      .def_readonly("residuals", &MinimaxSolution::residuals)
      .def_readonly("filter", &MinimaxSolution::filter);

  py::class_<MinimaxOptions>(m, "MinimaxOptions")
      .def(py::init<>())
      .def_readwrite("truncation", &MinimaxOptions::truncation)
      .def_readwrite("grid", &MinimaxOptions::grid)
      .def_readwrite("damping", &MinimaxOptions::damping)
      .def_readwrite("tol", &MinimaxOptions::tol)
      .def_readwrite("max_iterations", &MinimaxOptions::max_iterations);

  m.def("least_favorable_power",
        [](const PowerPairClass& cls, const std::vector<Complex>& a,
           const MinimaxOptions& opts) {
          return least_favorable_power(cls, make_functional(a, 0.0), opts);
        },
        py::arg("cls"), py::arg("a"), py::arg("options") = MinimaxOptions{});
  m.def("least_favorable_given_f",
        [](const py::object& f, double P2, const std::vector<Complex>& a,
           const MinimaxOptions& opts) {
          return least_favorable_given_f(make_density(f), P2, make_functional(a, 0.0), opts);
        },
        py::arg("f"), py::arg("P2"), py::arg("a"), py::arg("options") = MinimaxOptions{});
  m.def("least_favorable_joint",
        [](const JointMinimalClass& cls, const std::vector<Complex>& a,
           const MinimaxOptions& opts) {
          return least_favorable_joint(cls, make_functional(a, 0.0), opts);
        },
        py::arg("cls"), py::arg("a"), py::arg("options") = MinimaxOptions{});
  m.def("least_favorable_band_eps",
        [](const BandContaminationClass& cls, const std::vector<Complex>& a,
           const MinimaxOptions& opts) {
          return least_favorable_band_eps(cls, make_functional(a, 0.0), opts);
        },
        py::arg("cls"), py::arg("a"), py::arg("options") = MinimaxOptions{});

  py::class_<SaddlePointReport>(m, "SaddlePointReport")
      .def_readonly("trials", &SaddlePointReport::trials)
      .def_readonly("max_upper_violation", &SaddlePointReport::max_upper_violation)
      .def_readonly("max_lower_violation", &SaddlePointReport::max_lower_violation)
      .def_readonly("reference_delta", &SaddlePointReport::reference_delta)
      .def_readonly("passes", &SaddlePointReport::passes);
  m.def("verify_saddle_point",
        [](const MinimaxSolution& sol, const DensityClass& cls,
           const std::vector<Complex>& a, int n_trials, std::uint64_t seed, double tol,
           double slack) {
          return verify_saddle_point(sol, cls, make_functional(a, 0.0), n_trials, seed,
                                     tol, slack);
        },
        py::arg("solution"), py::arg("cls"), py::arg("a"), py::arg("n_trials") = 200,
        py::arg("seed") = 0, py::arg("tol") = 1e-8, py::arg("slack") = 1e-6);

  py::class_<GridMaxParams>(m, "GridMaxParams")
      .def(py::init<>())
      .def_readwrite("nodes", &GridMaxParams::nodes)
      .def_readwrite("restarts", &GridMaxParams::restarts)
      .def_readwrite("sweeps", &GridMaxParams::sweeps)
      .def_readwrite("truncation", &GridMaxParams::truncation)
      .def_readwrite("grid", &GridMaxParams::grid);
  py::class_<GridMaxResult>(m, "GridMaxResult")
      .def_property_readonly("f", [](const GridMaxResult& r) { return r.f; })
      .def_property_readonly("g", [](const GridMaxResult& r) { return r.g; })
      .def_readonly("delta", &GridMaxResult::delta)
      .def_readonly("evaluations", &GridMaxResult::evaluations)
      .def_readonly("restart_bests", &GridMaxResult::restart_bests);
  m.def("grid_maximize_delta",
        [](const DensityClass& cls, const std::vector<Complex>& a,
           const GridMaxParams& params, std::uint64_t seed) {
          return grid_maximize_delta(cls, make_functional(a, 0.0), params, seed);
        },
        py::arg("cls"), py::arg("a"), py::arg("params") = GridMaxParams{},
        py::arg("seed") = 0);

  py::class_<SamplePath>(m, "SamplePath")
      .def_readonly("values", &SamplePath::values)
      .def_readonly("seed", &SamplePath::seed);
  py::class_<EmpiricalMse>(m, "EmpiricalMse")
      .def_readonly("mean", &EmpiricalMse::mean)
      .def_readonly("stderr", &EmpiricalMse::stderr_)
      .def_readonly("paths", &EmpiricalMse::paths)
      .def_readonly("weight_tail_l1", &EmpiricalMse::weight_tail_l1)
      .def_readonly("bias_bound", &EmpiricalMse::bias_bound);
  py::class_<ToeplitzProjection>(m, "ToeplitzProjection")
      .def_readonly("w", &ToeplitzProjection::w)
      .def_readonly("mse", &ToeplitzProjection::mse);

  m.def("simulate_ma", &simulate_ma, py::arg("b"), py::arg("n"), py::arg("seed"));
  m.def("empirical_mse",
        [](const std::vector<Complex>& w, const std::vector<double>& bf,
           const std::vector<double>& bg, const std::vector<Complex>& a, int n,
           int paths, std::uint64_t seed) {
          return empirical_mse(w, bf, bg, make_functional(a, 0.0), n, paths, seed);
        },
        py::arg("w"), py::arg("b_signal"), py::arg("b_noise"), py::arg("a"),
        py::arg("n"), py::arg("paths"), py::arg("seed"));
  m.def("toeplitz_projection",
        [](const py::object& f, const py::object& g, const std::vector<Complex>& a,
           int window, int grid) {
          return toeplitz_projection(make_density(f), make_density(g),
                                     make_functional(a, 0.0), window, grid);
        },
        py::arg("f"), py::arg("g"), py::arg("a"), py::arg("window"),
        py::arg("grid_size") = 4096);
}
