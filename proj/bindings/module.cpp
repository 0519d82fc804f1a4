#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "lstail/correction.hpp"
#include "lstail/distribution.hpp"
#include "lstail/error.hpp"
#include "lstail/extremal.hpp"
#include "lstail/io.hpp"
#include "lstail/mg1.hpp"
#include "lstail/tailbound.hpp"
#include "lstail/transform.hpp"

namespace py = pybind11;
using namespace lstail;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Laplace-Stieltjes tail analysis: transforms, extremal envelopes, bounds";

  // Register the base first so the derived translators run earlier.
  py::register_exception<Error>(m, "LibError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);
  py::register_exception<AmbiguityError>(m, "AmbiguityError", PyExc_ArithmeticError);
  py::register_exception<SingularityError>(m, "SingularityError", PyExc_ArithmeticError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

  py::class_<Distribution>(m, "Distribution")
      .def_readonly("r", &Distribution::r)
      .def("discrete", &Distribution::discrete)
      .def("support_start", &Distribution::support_start)
      .def("tail", &Distribution::tail, py::arg("x"))
      .def("cdf", &Distribution::cdf, py::arg("x"))
      .def("density", &Distribution::density, py::arg("x"))
      .def("pmf", &Distribution::pmf, py::arg("n"))
      .def("mean", &Distribution::mean)
      .def("quantile", &Distribution::quantile, py::arg("u"))
      .def("phi_exact", &Distribution::phi_exact, py::arg("s"))
      .def("known_singularity", &Distribution::known_singularity, py::arg("n_alpha"),
           py::arg("n_beta"))
      .def("kind_name", &Distribution::kind_name)
      .def("__repr__", [](const Distribution& d) {
        return "<Distribution " + d.kind_name() + " r=" + io::format_double(d.r) + ">";
      });
  m.def("make_pareto", &make_pareto, py::arg("r"));
  m.def("make_zeta_difference", &make_zeta_difference, py::arg("r"));
  m.def("sample", &sample, py::arg("dist"), py::arg("count"), py::arg("seed"));
  m.def("empirical_tail", &empirical_tail, py::arg("draws"), py::arg("x"));
  m.def("zeta_diff_pmf_table", &zeta_diff_pmf_table, py::arg("r"), py::arg("n"));

  py::enum_<SingularityForm::Kind>(m, "FormKind")
      .value("power_log", SingularityForm::Kind::power_log)
      .value("pure_power", SingularityForm::Kind::pure_power);
  py::class_<SingularityForm>(m, "SingularityForm")
      .def(py::init<>())
      .def_readwrite("kind", &SingularityForm::kind)
      .def_readwrite("r", &SingularityForm::r)
      .def_readwrite("alpha", &SingularityForm::alpha)
      .def_readwrite("beta", &SingularityForm::beta)
      .def("singular_part", &SingularityForm::singular_part, py::arg("s"));

  m.def("phi_quadrature", &phi_quadrature, py::arg("dist"), py::arg("s"),
        py::arg("rel_tol") = 1e-10);
  m.def("power_log_coefficient", &power_log_coefficient, py::arg("r"));
  m.def("canonical_power_log", &canonical_power_log, py::arg("r"), py::arg("s"));
  m.def("pure_power_coefficient", &pure_power_coefficient, py::arg("r"));
  m.def("canonical_pure_power", &canonical_pure_power, py::arg("r"), py::arg("s"));
  m.def(
      "pgf_to_ls",
      [](const std::vector<double>& probs, cplx s, double rel_tol) {
        return pgf_to_ls(probs, s, rel_tol);
      },
      py::arg("probs"), py::arg("s"), py::arg("rel_tol") = 1e-10);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("form", &FitResult::form)
      .def_readonly("residual", &FitResult::residual)
      .def_readonly("runner_up_r", &FitResult::runner_up_r)
      .def_readonly("runner_up_residual", &FitResult::runner_up_residual);
  m.def(
      "fit_singularity",
      [](const std::vector<std::pair<double, double>>& samples,
         const std::vector<double>& candidates, int order) {
        std::vector<FitSample> fs;
        fs.reserve(samples.size());
        for (const auto& [s, v] : samples) fs.push_back({s, v});
        return fit_singularity(fs, candidates, order);
      },
      py::arg("samples"), py::arg("candidates"), py::arg("order"));
  m.def("sign_check", &sign_check, py::arg("form"));

  m.def("indicator_exp", &indicator_exp, py::arg("omega"), py::arg("t"));
  m.def("majorant1", &majorant1, py::arg("omega"), py::arg("t"), py::arg("abs_tol") = 1e-13);
  m.def("minorant1", &minorant1, py::arg("omega"), py::arg("t"), py::arg("abs_tol") = 1e-13);
  m.def("majorant", &majorant, py::arg("L"), py::arg("sigma"), py::arg("delta"), py::arg("t"),
        py::arg("abs_tol") = 1e-13);
  m.def("minorant", &minorant, py::arg("L"), py::arg("sigma"), py::arg("delta"), py::arg("t"),
        py::arg("abs_tol") = 1e-13);
  m.def("hat_q1", &hat_q1, py::arg("tau"));
  m.def("hat_q2", &hat_q2, py::arg("tau"));
  m.def("hat_m1_total_mass", &hat_m1_total_mass, py::arg("omega"));
  m.def("hat_majorant1", &hat_majorant1, py::arg("omega"), py::arg("tau"));
  m.def("hat_minorant1", &hat_minorant1, py::arg("omega"), py::arg("tau"));
  m.def(
      "hat_power",
      [](int L, double sigma, double delta, const std::vector<double>& taus, bool minor,
         double theta_step) { return hat_power(L, sigma, delta, taus, minor, theta_step); },
      py::arg("L"), py::arg("sigma"), py::arg("delta"), py::arg("taus"), py::arg("minor"),
      py::arg("theta_step") = 2.0 * kPi / 1024.0);
  m.def("hat_power_pointwise", &hat_power_pointwise, py::arg("L"), py::arg("sigma"),
        py::arg("delta"), py::arg("tau"), py::arg("minor"), py::arg("rel_tol") = 1e-6);
  m.def("hat_limit", &hat_limit, py::arg("L"), py::arg("delta"), py::arg("tau"),
        py::arg("minor"));
  m.def("majorant1_node_value", &majorant1_node_value, py::arg("omega"), py::arg("n"));

  py::class_<CorrectionPair>(m, "CorrectionPair")
      .def_readonly("form", &CorrectionPair::form)
      .def_readonly("L", &CorrectionPair::L)
      .def_readonly("g", &CorrectionPair::g)
      .def_readonly("tilde_beta", &CorrectionPair::tilde_beta)
      .def_readonly("d", &CorrectionPair::d);
  m.def("g_coefficients", &g_coefficients, py::arg("form"), py::arg("L"));
  m.def("build_correction", &build_correction, py::arg("form"), py::arg("L"));
  m.def("g_star", &g_star, py::arg("pair"), py::arg("t"));
  m.def(
      "h_star",
      [](const std::vector<double>& d, double t) { return h_star(d, t); }, py::arg("d"),
      py::arg("t"));
  m.def("G_star", &G_star, py::arg("pair"), py::arg("s"), py::arg("rel_tol") = 1e-11);
  m.def(
      "H_star", [](const std::vector<double>& d, cplx s) { return H_star(d, s); },
      py::arg("d"), py::arg("s"));
  m.def(
      "xi_exact",
      [](const Distribution& dist, const CorrectionPair& pair, cplx s, double rel_tol) {
        return xi([&dist](cplx z) { return dist.phi_exact(z); }, pair, s, rel_tol);
      },
      py::arg("dist"), py::arg("pair"), py::arg("s"), py::arg("rel_tol") = 1e-11);

  py::class_<BoundSettings>(m, "BoundSettings")
      .def(py::init<>())
      .def_readwrite("L", &BoundSettings::L)
      .def_readwrite("delta", &BoundSettings::delta)
      .def_readwrite("sigma2", &BoundSettings::sigma2)
      .def_readwrite("quad_rel_tol", &BoundSettings::quad_rel_tol)
      .def_readwrite("tau_points_per_cell", &BoundSettings::tau_points_per_cell);
  py::class_<DecayFit>(m, "DecayFit")
      .def_readonly("slope", &DecayFit::slope)
      .def_readonly("std_error", &DecayFit::std_error)
      .def_readonly("points_used", &DecayFit::points_used);
  m.def(
      "decay_rate_estimate",
      [](const std::vector<double>& x, const std::vector<double>& p) {
        return decay_rate_estimate(x, p);
      },
      py::arg("x"), py::arg("p"));
  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("x", &BoundReport::x)
      .def_readonly("lower", &BoundReport::lower)
      .def_readonly("upper", &BoundReport::upper)
      .def_readonly("tail_exact", &BoundReport::tail_exact)
      .def_readonly("scaled_lower", &BoundReport::scaled_lower)
      .def_readonly("scaled_upper", &BoundReport::scaled_upper)
      .def_readonly("r_used", &BoundReport::r_used)
      .def_readonly("eta_lower", &BoundReport::eta_lower)
      .def_readonly("eta_upper", &BoundReport::eta_upper)
      .def_readonly("eta_exact", &BoundReport::eta_exact)
      .def_readonly("fit_alpha0", &BoundReport::fit_alpha0)
      .def_readonly("fit_residual", &BoundReport::fit_residual)
      .def_readonly("sign_check_passed", &BoundReport::sign_check_passed)
      .def_readonly("sandwich_ok", &BoundReport::sandwich_ok)
      .def_readonly("notes", &BoundReport::notes);
  py::class_<BoundEngine>(m, "BoundEngine")
      .def(py::init<const Distribution&, const CorrectionPair&, const BoundSettings&>(),
           py::arg("dist"), py::arg("pair"), py::arg("settings"))
      .def("upper", &BoundEngine::upper, py::arg("x"))
      .def("lower", &BoundEngine::lower, py::arg("x"))
      .def("upper_order", &BoundEngine::upper_order)
      .def("lower_order", &BoundEngine::lower_order);
  m.def(
      "theorem_check",
      [](const Distribution& dist, int L, double x_lo, double x_hi, int points,
         std::optional<BoundSettings> settings, bool use_exact_form) {
        return theorem_check(dist, L, x_lo, x_hi, points, settings ? &*settings : nullptr,
                             use_exact_form);
      },
      py::arg("dist"), py::arg("L"), py::arg("x_lo"), py::arg("x_hi"), py::arg("points") = 25,
      py::arg("settings") = std::nullopt, py::arg("use_exact_form") = false);
  m.def(
      "appendix_a1",
      [](double n1, double n2, const std::vector<double>& xs) {
        return appendix_a1(n1, n2, xs);
      },
      py::arg("n1"), py::arg("n2"), py::arg("xs"));
  m.def(
      "appendix_a2",
      [](double k, double n, const std::vector<double>& xs) { return appendix_a2(k, n, xs); },
      py::arg("k"), py::arg("n"), py::arg("xs"));
  py::class_<KorevaarPoint>(m, "KorevaarPoint")
      .def_readonly("x", &KorevaarPoint::x)
      .def_readonly("left", &KorevaarPoint::left)
      .def_readonly("right", &KorevaarPoint::right);
  m.def(
      "korevaar_check",
      [](const Distribution& dist, const std::vector<double>& xs) {
        return korevaar_check(dist, xs);
      },
      py::arg("dist"), py::arg("xs"));

  py::class_<Mg1Model>(m, "Mg1Model")
      .def_readonly("a", &Mg1Model::a)
      .def_readonly("b", &Mg1Model::b)
      .def_readonly("mean_a", &Mg1Model::mean_a)
      .def_readonly("mean_b", &Mg1Model::mean_b)
      .def_readonly("pi0", &Mg1Model::pi0)
      .def_readonly("b_tail_exponent", &Mg1Model::b_tail_exponent);
  m.def("normalize_pi0", &normalize_pi0, py::arg("mean_a"), py::arg("mean_b"));
  m.def("make_mg1_zeta_service", &make_mg1_zeta_service, py::arg("r"), py::arg("mean_a"),
        py::arg("n_b"));
  m.def("make_mg1_model", &make_mg1_model, py::arg("a"), py::arg("b"));
  m.def("pk_pgf", &pk_pgf, py::arg("model"), py::arg("z"));
  m.def("pi_coefficients", &pi_coefficients, py::arg("model"), py::arg("N"));
  m.def("chain_oracle", &chain_oracle, py::arg("model"), py::arg("N"));
  py::class_<Mg1Report>(m, "Mg1Report")
      .def_readonly("eta_pi", &Mg1Report::eta_pi)
      .def_readonly("eta_b", &Mg1Report::eta_b)
      .def_readonly("pi0", &Mg1Report::pi0)
      .def_readonly("mass", &Mg1Report::mass)
      .def_readonly("verdict", &Mg1Report::verdict)
      .def_readonly("pi", &Mg1Report::pi);
  m.def("mg1_tail_report", &mg1_tail_report, py::arg("model"), py::arg("N"));

  m.def("distribution_to_json", [](const Distribution& d) { return io::to_json(d); });
  m.def("distribution_from_json", &io::distribution_from_json, py::arg("text"));
  m.def("form_to_json", [](const SingularityForm& f) { return io::to_json(f); });
  m.def("form_from_json", &io::form_from_json, py::arg("text"));
  m.def("pair_to_json", [](const CorrectionPair& p) { return io::to_json(p); });
  m.def("pair_from_json", &io::pair_from_json, py::arg("text"));
  m.def("bound_report_to_json", [](const BoundReport& r) { return io::to_json(r); });
  m.def("bound_report_csv", &io::bound_report_csv, py::arg("report"));
  m.def("mg1_report_to_json", [](const Mg1Report& r) { return io::to_json(r); });
  m.def("mg1_csv", &io::mg1_csv, py::arg("report"));
}
