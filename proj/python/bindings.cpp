#include "halflap/cli.hpp"
#include "halflap/extension.hpp"
#include "halflap/nonlinear.hpp"
#include "halflap/verification.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace halflap;

namespace {

using DomainHandle = std::shared_ptr<DiscreteDomain>;
using BasisHandle = std::shared_ptr<EigenBasis>;

DomainHandle handle(const DomainPtr& d) { return std::const_pointer_cast<DiscreteDomain>(d); }
BasisHandle handle(const BasisPtr& b) { return std::const_pointer_cast<EigenBasis>(b); }

Eigen::MatrixXd coordinates(const DiscreteDomain& d) {
  Eigen::MatrixXd xy(static_cast<Eigen::Index>(d.node_count()), d.dimension());
  for (std::size_t n = 0; n < d.node_count(); ++n) {
    for (int a = 0; a < d.dimension(); ++a) xy(static_cast<Eigen::Index>(n), a) = d.coordinate(n, a);
  }
  return xy;
}

void init_basis(py::module_& m) {
  py::class_<DiscreteDomain, DomainHandle>(m, "DiscreteDomain")
      .def_property_readonly("kind", [](const DiscreteDomain& d) {
        return d.kind() == DomainKind::interval ? "interval" : "rectangle";
      })
      .def_property_readonly("dimension", &DiscreteDomain::dimension)
      .def_property_readonly("node_count", &DiscreteDomain::node_count)
      .def_property_readonly("quad_weight", &DiscreteDomain::quad_weight)
      .def("length", &DiscreteDomain::length, py::arg("axis") = 0)
      .def("grid_count", &DiscreteDomain::grid_count, py::arg("axis") = 0)
      .def("spacing", &DiscreteDomain::spacing, py::arg("axis") = 0)
      .def("coordinates", &coordinates, "Node coordinates, shape (node_count, dimension).");

  m.def("make_interval", [](double L, int N) { return std::make_shared<DiscreteDomain>(make_interval(L, N)); },
        py::arg("length"), py::arg("grid_count"));
  m.def("make_rectangle",
        [](double L0, double L1, int N0, int N1) {
          return std::make_shared<DiscreteDomain>(make_rectangle(L0, L1, N0, N1));
        },
        py::arg("length0"), py::arg("length1"), py::arg("grid_count0"), py::arg("grid_count1"));

  py::class_<GridFn>(m, "GridFn")
      .def(py::init([](const DomainHandle& d, const Eigen::VectorXd& v) { return GridFn(d, v); }))
      .def_property_readonly("values", &GridFn::values)
      .def_property_readonly("domain", [](const GridFn& g) { return handle(g.domain_ptr()); })
      .def("sup_norm", &GridFn::sup_norm)
      .def("min", &GridFn::min);

  py::class_<EigenBasis, BasisHandle>(m, "EigenBasis")
      .def_property_readonly("size", &EigenBasis::size)
      .def_property_readonly("lambdas", &EigenBasis::lambdas)
      .def_property_readonly("sqrt_lambdas", &EigenBasis::sqrt_lambdas)
      .def_property_readonly("modes", &EigenBasis::modes)
      .def_property_readonly("domain", [](const EigenBasis& b) { return handle(b.domain_ptr()); })
      .def("frequencies", &EigenBasis::frequencies)
      .def("mode", &EigenBasis::mode, "Grid samples of mode k (0-based).");

  m.def("eigenpairs", [](const DomainHandle& d, int K) { return handle(make_basis(d, K)); },
        py::arg("domain"), py::arg("modes"));
  m.def("boundary_distance", [](const DomainHandle& d) { return boundary_distance(d); });
  m.def("inner_product", &inner_product);
  m.def("reflect", &reflect, py::arg("u"), py::arg("axis"));
}

void init_spectral(py::module_& m) {
  py::class_<SpectralFn>(m, "SpectralFn")
      .def(py::init([](const BasisHandle& b, const Eigen::VectorXd& c) { return SpectralFn(b, c); }))
      .def_property_readonly("coeffs", &SpectralFn::coeffs)
      .def_property_readonly("basis", [](const SpectralFn& f) { return handle(f.basis_ptr()); });

  m.def("analyze", [](const GridFn& u, const BasisHandle& b) { return analyze(u, b); });
  m.def("synthesize", &synthesize);
  m.def("apply_A_half", &apply_A_half);
  m.def("apply_B_half", &apply_B_half);
  m.def("apply_inv_laplacian", &apply_inv_laplacian);
  m.def("v0_norm_sq", &v0_norm_sq);
  m.def("hardy_quotient", &hardy_quotient);
}

void init_extension(py::module_& m) {
  m.def("evaluate_extension", &evaluate_extension, py::arg("f"), py::arg("y"));
  m.def("dirichlet_energy", &dirichlet_energy);
  m.def("dtn_fd", &dtn_fd, py::arg("f"), py::arg("h"));
  m.def("best_trace_constant", &best_trace_constant, py::arg("n"));
  m.def("extremal_quotient",
        [](double epsilon, double radius, int resolution, int n) {
          return extremal_quotient(ExtremalProfile{n, epsilon, {}}, radius, resolution);
        },
        py::arg("epsilon") = 1.0, py::arg("radius") = 200.0, py::arg("resolution") = 4096, py::arg("n") = 2);
}

void init_nonlinear(py::module_& m) {
  py::class_<SolveConfig>(m, "SolveConfig")
      .def(py::init<>())
      .def_readwrite("p", &SolveConfig::p)
      .def_readwrite("modes", &SolveConfig::modes)
      .def_readwrite("max_iter", &SolveConfig::max_iter)
      .def_readwrite("tol_residual", &SolveConfig::tol_residual)
      .def_readwrite("step_init", &SolveConfig::step_init)
      .def_readwrite("backtrack_factor", &SolveConfig::backtrack_factor)
      .def_readwrite("polish_iters", &SolveConfig::polish_iters)
      .def_readwrite("rng_seed", &SolveConfig::rng_seed)
      .def_readwrite("init_perturbation", &SolveConfig::init_perturbation)
      .def_readwrite("allow_near_critical", &SolveConfig::allow_near_critical)
      .def_readwrite("grad_tol", &SolveConfig::grad_tol);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("p", &SolveReport::p)
      .def_readonly("solution", &SolveReport::solution)
      .def_readonly("solution_grid", &SolveReport::solution_grid)
      .def_readonly("I0", &SolveReport::I0)
      .def_readonly("multiplier", &SolveReport::multiplier)
      .def_readonly("residual_inf", &SolveReport::residual_inf)
      .def_readonly("truncation_defect", &SolveReport::truncation_defect)
      .def_readonly("sup_norm", &SolveReport::sup_norm)
      .def_readonly("positivity_min", &SolveReport::positivity_min)
      .def_readonly("symmetry_defect", &SolveReport::symmetry_defect)
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("polish_iterations", &SolveReport::polish_iterations)
      .def_readonly("minimizer_converged", &SolveReport::minimizer_converged)
      .def_readonly("converged", &SolveReport::converged)
      .def_readonly("energy_trace", &SolveReport::energy_trace);

  m.def("critical_exponent", &critical_exponent, py::arg("n"));
  m.def("solve", [](const DomainHandle& d, const SolveConfig& cfg) { return solve(d, cfg); },
        py::arg("domain"), py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("rescale_to_solution", &rescale_to_solution, py::arg("w"), py::arg("I0"), py::arg("p"));
  m.def("residual", &residual, py::arg("u"), py::arg("p"));
  m.def("galerkin_residual", &galerkin_residual, py::arg("u"), py::arg("p"));
  m.def(
      "sweep",
      [](const DomainHandle& d, const std::vector<double>& ps, const SolveConfig& cfg, unsigned threads) {
        std::vector<py::dict> rows;
        std::vector<SweepRow> result;
        {
          py::gil_scoped_release release;
          result = sweep(d, ps, cfg, threads);
        }
        for (const auto& r : result) {
          py::dict row;
          row["p"] = r.p;
          row["sup_norm"] = r.sup_norm;
          row["residual"] = r.residual;
          row["converged"] = r.converged;
          row["error"] = r.error;
          rows.push_back(std::move(row));
        }
        return rows;
      },
      py::arg("domain"), py::arg("exponents"), py::arg("config"), py::arg("threads") = 0);
}

void init_verification(py::module_& m) {
  py::class_<CheckReport>(m, "CheckReport")
      .def_readonly("name", &CheckReport::name)
      .def_readonly("passed", &CheckReport::passed)
      .def_readonly("metric", &CheckReport::metric)
      .def_readonly("tolerance", &CheckReport::tolerance)
      .def_readonly("detail", &CheckReport::detail)
      .def("__repr__", [](const CheckReport& c) {
        std::ostringstream os;
        os << "<CheckReport " << c.name << (c.passed ? " passed" : " FAILED") << " metric=" << c.metric << ">";
        return os.str();
      });
  m.def("check_weak_mp", [](const BasisHandle& b, const GridFn& g) { return check_weak_mp(b, g); });
  m.def("check_positivity", &check_positivity);
  m.def("check_symmetry", &check_symmetry, py::arg("u"), py::arg("axis"), py::arg("rel_tol") = kSymmetryTol);
  m.def("check_monotonicity", &check_monotonicity, py::arg("u"), py::arg("axis"));
  m.def("check_hopf", &check_hopf);
  m.def("stability_margin", [](const DomainHandle& d, double c) { return stability_margin(*d, c); });
  m.def("check_battery", &check_battery, py::arg("report"), py::arg("weak_mp_samples") = 100,
        py::arg("seed") = 0);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral square root of the Dirichlet Laplacian on intervals and rectangles";
  init_basis(m);
  init_spectral(m);
  init_extension(m);
  init_nonlinear(m);
  init_verification(m);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line front end in process; returns (exit_code, stdout, stderr).");

  m.attr("__version__") = "0.1.0";
}
