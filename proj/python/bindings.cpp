#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlrothe/config.hpp"
#include "nlrothe/diagnostics.hpp"
#include "nlrothe/io.hpp"
#include "nlrothe/kernel.hpp"
#include "nlrothe/ladder.hpp"
#include "nlrothe/operator.hpp"
#include "nlrothe/stepper.hpp"

namespace py = pybind11;
using namespace nlrothe;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<double> from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    return {a.data(), a.data() + a.size()};
}

const char* verdict_str(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::info: return "info";
    }
    return "info";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Nonlocal p-diffusion solver: Rothe stepping, singular-kernel "
              "weights, truncated-data ladder and verification diagnostics";

    py::class_<Domain>(m, "Domain")
        .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
        .def_readonly("a", &Domain::a)
        .def_readonly("b", &Domain::b)
        .def("length", &Domain::length);

    py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
        .def(py::init([](const Domain& d, std::size_t m_) { return std::make_shared<Grid>(d, m_); }),
             py::arg("domain"), py::arg("m"))
        .def_property_readonly("domain", &Grid::domain)
        .def_property_readonly("m", &Grid::size)
        .def_property_readonly("h", &Grid::spacing)
        .def_property_readonly("centers", [](const Grid& g) { return to_array(g.centers()); });

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, std::size_t>(), py::arg("t_end"), py::arg("n_steps"))
        .def_readonly("t_end", &TimeGrid::t_end)
        .def_readonly("n_steps", &TimeGrid::n_steps)
        .def_readonly("dt", &TimeGrid::dt)
        .def("time", &TimeGrid::time);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init([](double s, double p, bool strict, double tol, int iters, double eps,
                         int q) {
                 SolverConfig cfg;
                 cfg.s = s;
                 cfg.p = p;
                 cfg.strict_exponent_check = strict;
                 cfg.newton_tol = tol;
                 cfg.newton_max_iters = iters;
                 cfg.regularization_eps = eps;
                 cfg.steklov_subsamples = q;
                 cfg.validate();
                 return cfg;
             }),
             py::arg("s"), py::arg("p"), py::arg("strict_exponent_check") = true,
             py::arg("newton_tol") = 1e-10, py::arg("newton_max_iters") = 200,
             py::arg("regularization_eps") = 1e-12, py::arg("steklov_subsamples") = 8)
        .def_readonly("s", &SolverConfig::s)
        .def_readonly("p", &SolverConfig::p)
        .def_property_readonly("alpha", &SolverConfig::alpha)
        .def_readonly("newton_tol", &SolverConfig::newton_tol);

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init([](GridPtr g, double fill) { return GridFunction(std::move(g), fill); }),
             py::arg("grid"), py::arg("fill") = 0.0)
        .def(py::init([](GridPtr g, const py::array_t<double, py::array::c_style |
                                                                  py::array::forcecast>& a) {
                 return GridFunction(std::move(g), from_array(a));
             }),
             py::arg("grid"), py::arg("values"))
        .def_static("sample",
                    [](GridPtr g, const std::function<double(double)>& f) {
                        return GridFunction::sample(std::move(g), f);
                    })
        .def_property_readonly("grid",
                               [](const GridFunction& u) {
                                   return std::const_pointer_cast<Grid>(u.grid_ptr());
                               })
        .def_property_readonly("values", [](const GridFunction& u) { return to_array(u.values()); })
        .def("__len__", &GridFunction::size)
        .def("__getitem__", [](const GridFunction& u, std::size_t i) {
            if (i >= u.size()) throw py::index_error();
            return u[i];
        });

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("time_grid", &Trajectory::time_grid)
        .def_property_readonly("states", [](const Trajectory& t) { return t.states; })
        .def("state", &Trajectory::at)
        .def("array", [](const Trajectory& t) {
            const std::size_t n = t.states.size();
            const std::size_t m = t.states.empty() ? 0 : t.states.front().size();
            py::array_t<double> out({n, m});
            auto buf = out.mutable_unchecked<2>();
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t i = 0; i < m; ++i) buf(k, i) = t.states[k][i];
            }
            return out;
        })
        .def("times", [](const Trajectory& t) {
            std::vector<double> ts(t.states.size());
            for (std::size_t k = 0; k < ts.size(); ++k) ts[k] = t.time_grid.time(k);
            return to_array(ts);
        });

    // truncation calculus
    m.def("truncate", &nlrothe::truncate, py::arg("height"), py::arg("r"));
    m.def("truncate_primitive", &nlrothe::truncate_primitive, py::arg("height"), py::arg("r"));
    m.def("truncate_excess", &nlrothe::truncate_excess, py::arg("height"), py::arg("r"));
    m.def("smooth_cutoff", &nlrothe::smooth_cutoff, py::arg("sigma"), py::arg("r"));
    m.def("smooth_cutoff_slope", &nlrothe::smooth_cutoff_slope, py::arg("sigma"), py::arg("r"));
    m.def("truncate_field", &nlrothe::truncate_field, py::arg("u"), py::arg("height"));

    m.def("norm_l1", [](const GridFunction& u) { return norm(u, NormMode::l1); });
    m.def("norm_l2", [](const GridFunction& u) { return norm(u, NormMode::l2); });
    m.def("norm_linf", [](const GridFunction& u) { return norm(u, NormMode::linf); });
    m.def("norm_lp", &nlrothe::norm_lp, py::arg("u"), py::arg("q"));

    // kernel
    py::class_<KernelWeights, std::shared_ptr<KernelWeights>>(m, "KernelWeights")
        .def_readonly("alpha", &KernelWeights::alpha)
        .def_readonly("lambda_", &KernelWeights::lambda)
        .def_property_readonly("grid",
                               [](const KernelWeights& kw) {
                                   return std::const_pointer_cast<Grid>(kw.grid);
                               })
        .def_property_readonly("w",
                               [](const KernelWeights& kw) {
                                   const std::size_t m_ = kw.size();
                                   py::array_t<double> out({m_, m_});
                                   auto buf = out.mutable_unchecked<2>();
                                   for (std::size_t i = 0; i < m_; ++i) {
                                       for (std::size_t j = 0; j < m_; ++j) {
                                           buf(i, j) = kw.w_at(i, j);
                                       }
                                   }
                                   return out;
                               })
        .def_property_readonly("tau", [](const KernelWeights& kw) { return to_array(kw.tau); });

    m.def("cell_pair_weight", &nlrothe::cell_pair_weight, py::arg("h"), py::arg("d"), py::arg("alpha"));
    m.def("tail_weight", &nlrothe::tail_weight, py::arg("domain"), py::arg("x"), py::arg("alpha"));
    m.def("cell_total_weight", &nlrothe::cell_total_weight, py::arg("h"), py::arg("alpha"));
    m.def(
        "assemble",
        [](GridPtr grid, const SolverConfig& cfg, const std::function<double(double, double)>& kappa,
           double lambda, std::optional<std::size_t> band) {
            AssembleOptions opts;
            if (kappa) opts.kappa = kappa;
            opts.lambda = lambda;
            opts.band = band;
            return std::make_shared<KernelWeights>(assemble(std::move(grid), cfg, opts));
        },
        py::arg("grid"), py::arg("config"), py::arg("kappa") = nullptr, py::arg("lambda_") = 1.0,
        py::arg("band") = std::nullopt);
    m.def("poincare_ratio", &nlrothe::poincare_ratio, py::arg("u"), py::arg("weights"), py::arg("p"));

    // operator
    py::class_<NonlocalOperator>(m, "NonlocalOperator")
        .def(py::init([](std::shared_ptr<KernelWeights> kw, const SolverConfig& cfg) {
                 return NonlocalOperator(std::move(kw), cfg);
             }),
             py::arg("weights"), py::arg("config"))
        .def_readonly("p", &NonlocalOperator::p);
    m.def("apply", &nlrothe::apply, py::arg("op"), py::arg("u"));
    m.def("gagliardo_energy", &nlrothe::gagliardo_energy, py::arg("weights"), py::arg("u"), py::arg("p"));
    m.def("pairing", &nlrothe::pairing, py::arg("op"), py::arg("w"), py::arg("v"));

    // sources and stepping
    py::class_<SourceSpec>(m, "SourceSpec")
        .def_readonly("nonneg_required", &SourceSpec::nonneg_required)
        .def("evaluate", [](const SourceSpec& s, const Grid& g, std::size_t cell, double t) {
            return s.evaluate(g, cell, t);
        });
    m.def(
        "analytic_source",
        [](const std::function<double(double, double)>& f, bool nonneg) {
            return make_analytic_source(f, "python", nonneg);
        },
        py::arg("f"), py::arg("nonneg") = false);
    m.def("registry_source", &nlrothe::make_registry_source, py::arg("spec"), py::arg("domain"),
          py::arg("nonneg") = false);
    m.def("registry_field", &nlrothe::make_registry_field, py::arg("spec"), py::arg("grid"),
          py::arg("nonneg") = false);

    m.def("steklov_average", &nlrothe::steklov_average, py::arg("f"), py::arg("t"), py::arg("dt"),
          py::arg("grid"), py::arg("q"));
    m.def("solve", &nlrothe::solve, py::arg("u0"), py::arg("f"), py::arg("time_grid"), py::arg("op"),
          py::arg("config"));

    py::class_<AprioriReport>(m, "AprioriReport")
        .def_readonly("sup_l2", &AprioriReport::sup_l2)
        .def_readonly("time_integrated_energy", &AprioriReport::time_integrated_energy);
    m.def("apriori_energy_report", &nlrothe::apriori_energy_report, py::arg("trajectory"), py::arg("op"));

    // ladder
    py::class_<LadderRun>(m, "LadderRun")
        .def_readonly("levels", &LadderRun::levels)
        .def_property_readonly("trajectories", [](const LadderRun& r) { return r.trajectories; });
    m.def("truncate_data", &nlrothe::truncate_data, py::arg("f"), py::arg("u0"), py::arg("height"));
    m.def("run_ladder", &nlrothe::run_ladder, py::arg("f"), py::arg("u0"), py::arg("levels"),
          py::arg("time_grid"), py::arg("op"), py::arg("config"));
    py::class_<CauchyGap>(m, "CauchyGap")
        .def_readonly("a_nm", &CauchyGap::a_nm)
        .def_readonly("bound", &CauchyGap::bound)
        .def_readonly("observed", &CauchyGap::observed);
    m.def("cauchy_gap", &nlrothe::cauchy_gap, py::arg("run"), py::arg("i"), py::arg("j"));
    m.def("monotone_defect", &nlrothe::monotone_defect, py::arg("run"));

    // diagnostics
    py::class_<TestFunction>(m, "TestFunction")
        .def_readonly("vanishes_at_end", &TestFunction::vanishes_at_end)
        .def_readonly("label", &TestFunction::label)
        .def("__call__", &TestFunction::operator(), py::arg("x"), py::arg("t"));
    m.def("test_function_family", &nlrothe::test_function_family, py::arg("domain"), py::arg("t_end"));

    py::class_<ReportEntry>(m, "ReportEntry")
        .def_readonly("name", &ReportEntry::name)
        .def_readonly("value", &ReportEntry::value)
        .def_property_readonly("bound",
                               [](const ReportEntry& e) -> py::object {
                                   if (!e.bound) return py::none();
                                   return py::float_(*e.bound);
                               })
        .def_property_readonly("verdict",
                               [](const ReportEntry& e) { return verdict_str(e.verdict); })
        .def_readonly("context", &ReportEntry::context);

    m.def("trajectory_sup", &nlrothe::trajectory_sup, py::arg("trajectory"), py::arg("from_state") = 0);
    m.def("trajectory_median", &nlrothe::trajectory_median, py::arg("trajectory"),
          py::arg("from_state") = 1);
    m.def("truncation_energy_check", &nlrothe::truncation_energy_check, py::arg("trajectory"),
          py::arg("op"), py::arg("height"), py::arg("f_l1"), py::arg("u0_l1"));
    m.def("renormalized_tail", &nlrothe::renormalized_tail, py::arg("trajectory"), py::arg("weights"),
          py::arg("p"), py::arg("heights"));
    m.def("renormalized_residual", &nlrothe::renormalized_residual, py::arg("trajectory"), py::arg("op"),
          py::arg("sigma"), py::arg("phi"), py::arg("f"), py::arg("config"));
    m.def("entropy_residual", &nlrothe::entropy_residual, py::arg("trajectory"), py::arg("op"),
          py::arg("height"), py::arg("phi"), py::arg("f"), py::arg("config"));
    m.def("weak_residual", &nlrothe::weak_residual, py::arg("trajectory"), py::arg("op"), py::arg("phi"),
          py::arg("f"), py::arg("config"));
    m.def("comparison_check", &nlrothe::comparison_check, py::arg("run_u"), py::arg("run_v"));
    m.def("poincare_report", &nlrothe::poincare_report, py::arg("weights"), py::arg("p"),
          py::arg("samples"));
}
