#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lstail/correction.hpp"
#include "lstail/distribution.hpp"
#include "lstail/error.hpp"
#include "lstail/extremal.hpp"
#include "lstail/io.hpp"
#include "lstail/mg1.hpp"
#include "lstail/tailbound.hpp"
#include "lstail/transform.hpp"

namespace {

using lstail::cplx;
using lstail::io::format_double;
using nlohmann::json;

struct Options {
  std::string config_path;
  std::string output_path;  // empty = stdout
  std::string format = "json";

  std::string dist = "pareto";
  double r = 1.0;
  int L = 2;
  double x_min = 10.0;
  double x_max = 1e4;
  int points = 25;

  double s_min = 2e-4;
  double s_max = 2e-2;
  int samples = 100;
  int order = 4;
  std::string candidates = "0.5,1,1.5,2,2.5,3";

  double delta = 0.0;
  std::string sigma2 = "1e-2,1e-3,1e-4";
  double quad_tol = 1e-9;
  int tau_per_cell = 48;

  std::string suite = "all";

  double mean_a = 0.5;
  int chain_n = 1000;
  int n_b = 0;  // 0 = 4 * chain_n
  bool with_oracle = false;

  int mg1_r = 3;

  std::string which = "all";
  int n1 = 2;
  int n2 = 3;
  double k_rate = 1.0;
  int n_pow = 2;

  int empirical = 0;
  std::uint64_t seed = 1;
};

void log_line(const std::string& s) { std::fprintf(stderr, "log: %s\n", s.c_str()); }

// Flat-JSON config application: every key must name a registered flag, and a
// flag given on the command line wins over the file value.
struct Binder {
  struct Item {
    std::string key;
    CLI::Option* opt;
    std::function<void(const json&)> set;
  };
  std::vector<Item> items;

  static void assign(const json& v, double* t, const std::string& key) {
    if (!v.is_number()) throw lstail::DomainError("config: key '" + key + "' must be a number");
    *t = v.get<double>();
  }
  static void assign(const json& v, int* t, const std::string& key) {
    if (!v.is_number()) throw lstail::DomainError("config: key '" + key + "' must be a number");
    double d = v.get<double>();
    if (std::abs(d - std::round(d)) > 1e-9)
      throw lstail::DomainError("config: key '" + key + "' must be an integer");
    *t = static_cast<int>(std::llround(d));
  }
  static void assign(const json& v, std::uint64_t* t, const std::string& key) {
    if (!v.is_number_integer())
      throw lstail::DomainError("config: key '" + key + "' must be an integer");
    *t = v.get<std::uint64_t>();
  }
  static void assign(const json& v, bool* t, const std::string& key) {
    if (!v.is_boolean()) throw lstail::DomainError("config: key '" + key + "' must be a boolean");
    *t = v.get<bool>();
  }
  static void assign(const json& v, std::string* t, const std::string& key) {
    if (!v.is_string()) throw lstail::DomainError("config: key '" + key + "' must be a string");
    *t = v.get<std::string>();
  }

  template <typename T>
  void bind(CLI::Option* opt, std::string key, T* target) {
    std::string k = key;
    items.push_back({std::move(key), opt, [target, k](const json& v) { assign(v, target, k); }});
  }

  void apply(const json& cfg, const std::string& subname) const {
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      const std::string& k = it.key();
      if (k == "command") {
        if (!it.value().is_string() || it.value().get<std::string>() != subname)
          throw lstail::DomainError("config: 'command' does not match the subcommand");
        continue;
      }
      const Item* found = nullptr;
      for (const Item& item : items)
        if (item.key == k) found = &item;
      if (!found) throw lstail::DomainError("config: unknown key '" + k + "'");
      if (found->opt->count() == 0) found->set(it.value());
    }
  }
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lstail::DomainError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const std::exception& e) {
    throw lstail::DomainError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw lstail::DomainError("config: expected a JSON object");
  return j;
}

void emit(const Options& o, std::string text) {
  if (text.empty() || text.back() != '\n') text += '\n';
  if (o.output_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(o.output_path);
  if (!out) throw lstail::DomainError("output: cannot open '" + o.output_path + "'");
  out << text;
}

lstail::Distribution make_dist(const Options& o) {
  if (o.dist == "pareto") return lstail::make_pareto(o.r);
  if (o.dist == "zeta_diff") {
    long long ri = std::llround(o.r);
    if (std::abs(o.r - static_cast<double>(ri)) > 1e-9)
      throw lstail::DomainError("zeta_diff needs an integer r");
    return lstail::make_zeta_difference(static_cast<int>(ri));
  }
  throw lstail::DomainError("unknown distribution '" + o.dist + "'");
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw lstail::DomainError(std::string(what) + ": bad number '" + cell + "'");
    }
  }
  if (out.empty()) throw lstail::DomainError(std::string(what) + ": empty list");
  return out;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw lstail::DomainError("grid: needs 0 < min < max and at least 2 points");
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    xs[static_cast<std::size_t>(i)] =
        lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  return xs;
}

std::string num_array(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out + "]";
}

lstail::BoundSettings settings_from(const Options& o) {
  lstail::BoundSettings s;
  s.L = o.L;
  s.delta = o.delta;
  s.sigma2 = parse_list(o.sigma2, "sigma2 schedule");
  s.quad_rel_tol = o.quad_tol;
  s.tau_points_per_cell = o.tau_per_cell;
  return s;
}

int run_analyze(const Options& o) {
  lstail::Distribution dist = make_dist(o);
  std::vector<double> xs = log_spaced(o.x_min, o.x_max, o.points);
  std::vector<double> tails(xs.size()), slope(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) tails[i] = dist.tail(xs[i]);
  auto local_slope = [&](std::size_t a, std::size_t b) {
    return (std::log(tails[b]) - std::log(tails[a])) / (std::log(xs[b]) - std::log(xs[a]));
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::size_t a = i == 0 ? 0 : i - 1;
    std::size_t b = i + 1 == xs.size() ? i : i + 1;
    slope[i] = local_slope(a, b);
  }
  std::vector<double> emp;
  if (o.empirical > 0) {
    std::vector<double> draws =
        lstail::sample(dist, static_cast<std::size_t>(o.empirical), o.seed);
    emp.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) emp[i] = lstail::empirical_tail(draws, xs[i]);
  }
  if (o.format == "csv") {
    std::string out = emp.empty() ? "x,tail,slope\n" : "x,tail,slope,empirical\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out += format_double(xs[i]) + "," + format_double(tails[i]) + "," +
             format_double(slope[i]);
      if (!emp.empty()) out += "," + format_double(emp[i]);
      out += "\n";
    }
    emit(o, out);
  } else {
    std::string out = "{\"schema\":\"v1\",\"dist\":" + lstail::io::to_json(dist);
    out += ",\"x\":" + num_array(xs) + ",\"tail\":" + num_array(tails) +
           ",\"slope\":" + num_array(slope);
    if (!emp.empty()) out += ",\"empirical\":" + num_array(emp);
    out += "}";
    emit(o, out);
  }
  lstail::DecayFit fit = lstail::decay_rate_estimate(xs, tails);
  log_line("tail slope over top decade " + format_double(fit.slope) + " (stderr " +
           format_double(fit.std_error) + ")");
  return 0;
}

int run_fit(const Options& o) {
  lstail::Distribution dist = make_dist(o);
  std::vector<double> ss = log_spaced(o.s_min, o.s_max, o.samples);
  std::vector<lstail::FitSample> samples;
  samples.reserve(ss.size());
  for (double s : ss)
    samples.push_back({s, lstail::phi_quadrature(dist, s, o.quad_tol).real()});
  std::vector<double> cands = parse_list(o.candidates, "candidates");
  bool have = false;
  for (double c : cands) have = have || std::abs(c - dist.r) < 1e-9;
  if (!have) cands.push_back(dist.r);
  lstail::FitResult res = lstail::fit_singularity(samples, cands, o.order);
  bool sign_ok = lstail::sign_check(res.form);
  log_line("fit residual " + format_double(res.residual) + ", runner-up r " +
           format_double(res.runner_up_r) + " residual " +
           format_double(res.runner_up_residual));
  if (o.format == "csv") {
    std::string out = "field,value\n";
    out += "kind," + std::string(res.form.kind == lstail::SingularityForm::Kind::power_log
                                     ? "power_log"
                                     : "pure_power") +
           "\n";
    out += "r," + format_double(res.form.r) + "\n";
    for (std::size_t i = 0; i < res.form.alpha.size(); ++i)
      out += "alpha_" + std::to_string(i) + "," + format_double(res.form.alpha[i]) + "\n";
    for (std::size_t i = 0; i < res.form.beta.size(); ++i)
      out += "beta_" + std::to_string(i) + "," + format_double(res.form.beta[i]) + "\n";
    out += "residual," + format_double(res.residual) + "\n";
    out += "runner_up_r," + format_double(res.runner_up_r) + "\n";
    out += "runner_up_residual," + format_double(res.runner_up_residual) + "\n";
    out += std::string("sign_check,") + (sign_ok ? "true" : "false") + "\n";
    emit(o, out);
  } else {
    std::string form = lstail::io::to_json(res.form);
    std::string out = form.substr(0, form.size() - 1);
    out += ",\"residual\":" + format_double(res.residual);
    out += ",\"runner_up_r\":" + format_double(res.runner_up_r);
    out += ",\"runner_up_residual\":" + format_double(res.runner_up_residual);
    out += std::string(",\"sign_check\":") + (sign_ok ? "true" : "false") + "}";
    emit(o, out);
  }
  return 0;
}

struct Check {
  std::string name;
  bool pass;
};

void run_check(std::vector<Check>& checks, const std::string& name,
               const std::function<bool()>& fn) {
  bool ok = false;
  try {
    ok = fn();
  } catch (const std::exception& e) {
    log_line(name + " threw: " + e.what());
    ok = false;
  }
  checks.push_back({name, ok});
}

// 53-bit uniforms, platform independent.
struct UniformStream {
  std::mt19937_64 rng;
  explicit UniformStream(std::uint64_t seed) : rng(seed) {}
  double next() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
};

void signs_suite(std::vector<Check>& c) {
  run_check(c, "sign_power_log_r1", [] {
    return lstail::sign_check(lstail::make_pareto(1.0).known_singularity(1, 2));
  });
  run_check(c, "sign_power_log_r2", [] {
    return lstail::sign_check(lstail::make_zeta_difference(2).known_singularity(1, 2));
  });
  run_check(c, "sign_pure_power_r_half", [] {
    return lstail::sign_check(lstail::make_pareto(0.5).known_singularity(1, 2));
  });
  run_check(c, "sign_pure_power_r_three_halves", [] {
    return lstail::sign_check(lstail::make_pareto(1.5).known_singularity(1, 2));
  });
  run_check(c, "coeff_power_log_r1",
            [] { return std::abs(lstail::power_log_coefficient(1) - 1.0) < 1e-15; });
  run_check(c, "coeff_power_log_r2",
            [] { return std::abs(lstail::power_log_coefficient(2) + 0.5) < 1e-15; });
  run_check(c, "coeff_pure_power_half", [] {
    return std::abs(lstail::pure_power_coefficient(0.5) + 2.0 * std::sqrt(lstail::kPi)) < 1e-12;
  });
  run_check(c, "coeff_pure_power_three_halves", [] {
    return std::abs(lstail::pure_power_coefficient(1.5) - 4.0 * std::sqrt(lstail::kPi) / 3.0) <
           1e-12;
  });
}

void extremal_suite(std::vector<Check>& c) {
  run_check(c, "interpolation_at_integers", [] {
    double omega = 0.3;
    for (long long n = -3; n <= 6; ++n) {
      double got = lstail::majorant1(omega, static_cast<double>(n));
      if (std::abs(got - lstail::majorant1_node_value(omega, n)) > 1e-10) return false;
    }
    return true;
  });
  run_check(c, "sandwich_order1", [] {
    double omega = 0.4;
    UniformStream u(2026);
    for (int i = 0; i < 2000; ++i) {
      double t = -40.0 + 80.0 * u.next();
      double ind = lstail::indicator_exp(omega, t);
      if (lstail::minorant1(omega, t) > ind + 1e-10) return false;
      if (lstail::majorant1(omega, t) < ind - 1e-10) return false;
    }
    return true;
  });
  run_check(c, "sandwich_power_L3", [] {
    double sigma = 0.2, delta = 1.0;
    UniformStream u(2027);
    for (int i = 0; i < 1000; ++i) {
      double t = -40.0 + 80.0 * u.next();
      double ind = lstail::indicator_exp(3.0 * sigma, t);
      if (lstail::minorant(3, sigma, delta, t) > ind + 1e-10) return false;
      if (lstail::majorant(3, sigma, delta, t) < ind - 1e-10) return false;
    }
    return true;
  });
  run_check(c, "transform_mass_at_zero", [] {
    for (double omega : {0.2, 1.0}) {
      cplx v = lstail::hat_minorant1(omega, 0.0);
      if (std::abs(v - cplx(lstail::hat_m1_total_mass(omega), 0.0)) > 1e-13) return false;
    }
    return true;
  });
  run_check(c, "power_grid_vs_pointwise_L2", [] {
    double sigma = 0.3, delta = 1.0;
    std::vector<double> taus = {0.3, 1.1};
    std::vector<cplx> grid = lstail::hat_power(2, sigma, delta, taus, false);
    for (std::size_t i = 0; i < taus.size(); ++i) {
      cplx pw = lstail::hat_power_pointwise(2, sigma, delta, taus[i], false);
      if (std::abs(grid[i] - pw) > 1e-3) return false;
    }
    return true;
  });
  run_check(c, "limit_matches_small_sigma_L1", [] {
    double delta = 2.0, tau = 1.0;
    cplx lim = lstail::hat_limit(1, delta, tau, false);
    cplx pw = lstail::hat_power_pointwise(1, 1e-5, delta, tau, false);
    return std::abs(lim - pw) <= 1e-3 * std::abs(lim);
  });
  run_check(c, "limit_matches_small_sigma_L3", [] {
    double delta = 1.0, tau = 1.5;
    cplx lim = lstail::hat_limit(3, delta, tau, false);
    cplx pw = lstail::hat_power_pointwise(3, 1e-5, delta, tau, false);
    return std::abs(lim - pw) <= 1e-3 * std::abs(lim);
  });
  run_check(c, "limit_frozen_value", [] {
    cplx got = lstail::hat_limit(1, 2.0 * lstail::kPi, lstail::kPi, false);
    cplx want(0.25, -1.0 / (2.0 * lstail::kPi));
    return std::abs(got - want) < 1e-6;
  });
}

void correction_suite(std::vector<Check>& c) {
  run_check(c, "g0_power_log_r1", [] {
    auto form = lstail::make_pareto(1.0).known_singularity(1, 2);
    return std::abs(lstail::g_coefficients(form, 1)[0] - 1.0) < 1e-12;
  });
  run_check(c, "g0_power_log_r2", [] {
    // pmf (n+1)^-2 - (n+2)^-2 ~ 2 n^-3, so the matched density has g_0 = 2
    auto form = lstail::make_zeta_difference(2).known_singularity(1, 2);
    return std::abs(lstail::g_coefficients(form, 1)[0] - 2.0) < 1e-12;
  });
  run_check(c, "g0_pure_power_half", [] {
    auto form = lstail::make_pareto(0.5).known_singularity(1, 2);
    return std::abs(lstail::g_coefficients(form, 1)[0] - 0.5) < 1e-12;
  });
  run_check(c, "pair_residuals_r1_L2", [] {
    lstail::build_correction(lstail::make_pareto(1.0).known_singularity(2, 4), 2);
    return true;  // residual guards throw on failure
  });
  run_check(c, "pair_residuals_zeta2_L2", [] {
    lstail::build_correction(lstail::make_zeta_difference(2).known_singularity(2, 4), 2);
    return true;
  });
  run_check(c, "pair_residuals_half_L2", [] {
    lstail::build_correction(lstail::make_pareto(0.5).known_singularity(2, 4), 2);
    return true;
  });
  run_check(c, "xi_vanishes_to_order_L", [] {
    lstail::Distribution dist = lstail::make_pareto(1.0);
    auto pair = lstail::build_correction(dist.known_singularity(2, 4), 2);
    auto phi = [&](cplx s) { return dist.phi_exact(s); };
    double hi = std::abs(lstail::xi(phi, pair, cplx(1e-2, 0.0)));
    double lo = std::abs(lstail::xi(phi, pair, cplx(1e-3, 0.0)));
    return lo <= hi / 10.0;
  });
}

int run_verify(const Options& o) {
  std::vector<Check> checks;
  if (o.suite != "all" && o.suite != "signs" && o.suite != "extremal" &&
      o.suite != "correction")
    throw lstail::DomainError("unknown suite '" + o.suite + "'");
  if (o.suite == "all" || o.suite == "signs") signs_suite(checks);
  if (o.suite == "all" || o.suite == "extremal") extremal_suite(checks);
  if (o.suite == "all" || o.suite == "correction") correction_suite(checks);

  bool all_pass = true;
  for (const Check& c : checks) all_pass = all_pass && c.pass;
  if (o.format == "csv") {
    std::string out = "name,pass\n";
    for (const Check& c : checks)
      out += c.name + "," + (c.pass ? "true" : "false") + "\n";
    emit(o, out);
  } else {
    std::string out = "{\"schema\":\"v1\",\"suite\":\"" + o.suite + "\",\"checks\":[";
    for (std::size_t i = 0; i < checks.size(); ++i) {
      if (i) out += ",";
      out += "{\"name\":\"" + checks[i].name + "\",\"pass\":" +
             (checks[i].pass ? "true" : "false") + "}";
    }
    out += std::string("],\"all_pass\":") + (all_pass ? "true" : "false") + "}";
    emit(o, out);
  }
  for (const Check& c : checks) log_line(std::string(c.pass ? "PASS " : "FAIL ") + c.name);
  if (!all_pass) {
    std::fprintf(stderr,
                 "{\"schema\":\"v1\",\"error\":\"verification\",\"detail\":\"one or more "
                 "checks failed\"}\n");
    return 3;
  }
  return 0;
}

int run_bound(const Options& o, bool full_pipeline) {
  lstail::Distribution dist = make_dist(o);
  lstail::BoundSettings set = settings_from(o);
  lstail::BoundReport rep = lstail::theorem_check(dist, o.L, o.x_min, o.x_max, o.points, &set,
                                                  !full_pipeline);
  emit(o, o.format == "csv" ? lstail::io::bound_report_csv(rep) : lstail::io::to_json(rep));
  log_line("fit residual " + format_double(rep.fit_residual) + ", " + rep.notes);
  log_line("eta lower " + format_double(rep.eta_lower) + ", upper " +
           format_double(rep.eta_upper) + ", exact " + format_double(rep.eta_exact));
  if (!rep.sandwich_ok || !rep.sign_check_passed) {
    std::fprintf(stderr,
                 "{\"schema\":\"v1\",\"error\":\"invariant\",\"detail\":\"%s\"}\n",
                 !rep.sandwich_ok ? "bounds failed to bracket the exact tail"
                                  : "leading-coefficient parity check failed");
    return 3;
  }
  return 0;
}

int run_mg1(const Options& o) {
  if (o.chain_n < 10) throw lstail::DomainError("mg1: N too small");
  std::size_t n_b = o.n_b > 0 ? static_cast<std::size_t>(o.n_b)
                              : static_cast<std::size_t>(4 * o.chain_n);
  lstail::Mg1Model model = lstail::make_mg1_zeta_service(o.mg1_r, o.mean_a, n_b);
  lstail::Mg1Report rep =
      lstail::mg1_tail_report(model, static_cast<std::size_t>(o.chain_n));
  double oracle_diff = -1.0;
  if (o.with_oracle) {
    std::vector<double> oracle =
        lstail::chain_oracle(model, static_cast<std::size_t>(o.chain_n));
    oracle_diff = 0.0;
    for (std::size_t n = 0; n < rep.pi.size(); ++n)
      oracle_diff = std::max(oracle_diff, std::abs(rep.pi[n] - oracle[n]));
    log_line("max |pi - oracle| = " + format_double(oracle_diff));
  }
  if (o.format == "csv") {
    emit(o, lstail::io::mg1_csv(rep));
  } else {
    std::string out = lstail::io::to_json(rep);
    if (oracle_diff >= 0.0) {
      out.pop_back();
      out += ",\"oracle_max_diff\":" + format_double(oracle_diff) + "}";
    }
    emit(o, out);
  }
  log_line("eta_pi " + format_double(rep.eta_pi) + " vs eta_b " + format_double(rep.eta_b) +
           ", mass " + format_double(rep.mass));
  if (!rep.verdict) {
    std::fprintf(stderr,
                 "{\"schema\":\"v1\",\"error\":\"invariant\",\"detail\":\"stationary decay "
                 "rate does not match the service tail\"}\n");
    return 3;
  }
  return 0;
}

int run_appendix(const Options& o) {
  bool want_a1 = o.which == "all" || o.which == "a1";
  bool want_a2 = o.which == "all" || o.which == "a2";
  bool want_kv = o.which == "korevaar";
  if (!want_a1 && !want_a2 && !want_kv)
    throw lstail::DomainError("appendix: unknown part '" + o.which + "'");

  std::vector<std::string> parts_json;
  std::string csv;
  if (want_a1) {
    std::vector<double> xs = log_spaced(o.x_min, o.x_max, o.points);
    auto rows = lstail::appendix_a1(o.n1, o.n2, xs);
    std::vector<double> vals(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) vals[i] = rows[i].second;
    lstail::DecayFit fit = lstail::decay_rate_estimate(xs, vals);
    log_line("a1 scaled-kernel slope " + format_double(fit.slope));
    parts_json.push_back("{\"part\":\"a1\",\"n1\":" + std::to_string(o.n1) +
                         ",\"n2\":" + std::to_string(o.n2) + ",\"x\":" + num_array(xs) +
                         ",\"value\":" + num_array(vals) +
                         ",\"slope\":" + format_double(fit.slope) + "}");
    csv += "# part=a1 n1=" + std::to_string(o.n1) + " n2=" + std::to_string(o.n2) + "\n";
    csv += "x,value\n";
    for (const auto& [x, v] : rows) csv += format_double(x) + "," + format_double(v) + "\n";
  }
  if (want_a2) {
    std::vector<double> xs = log_spaced(o.x_min, o.x_max, o.points);
    auto rows = lstail::appendix_a2(o.k_rate, o.n_pow, xs);
    std::vector<double> vals(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) vals[i] = rows[i].second;
    double limit = 1.0 / o.k_rate;
    double dev = std::abs(vals.back() - limit) / limit;
    log_line("a2 relative deviation from 1/k at x_max: " + format_double(dev));
    parts_json.push_back("{\"part\":\"a2\",\"k\":" + format_double(o.k_rate) +
                         ",\"n\":" + std::to_string(o.n_pow) + ",\"x\":" + num_array(xs) +
                         ",\"value\":" + num_array(vals) +
                         ",\"limit\":" + format_double(limit) +
                         ",\"rel_dev_at_max\":" + format_double(dev) + "}");
    csv += "# part=a2 k=" + format_double(o.k_rate) + " n=" + std::to_string(o.n_pow) + "\n";
    csv += "x,value\n";
    for (const auto& [x, v] : rows) csv += format_double(x) + "," + format_double(v) + "\n";
  }
  if (want_kv) {
    lstail::Distribution dist = make_dist(o);
    std::vector<double> xs = log_spaced(o.x_min, o.x_max, o.points);
    auto rows = lstail::korevaar_check(dist, xs);
    std::vector<double> xcol(rows.size()), left(rows.size()), right(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      xcol[i] = rows[i].x;
      left[i] = rows[i].left;
      right[i] = rows[i].right;
    }
    double rel = std::abs(left.back() - right.back()) / std::abs(right.back());
    log_line("korevaar relative gap at x_max: " + format_double(rel));
    parts_json.push_back("{\"part\":\"korevaar\",\"r\":" + format_double(o.r) +
                         ",\"x\":" + num_array(xcol) + ",\"left\":" + num_array(left) +
                         ",\"right\":" + num_array(right) +
                         ",\"rel_gap_at_max\":" + format_double(rel) + "}");
    csv += "# part=korevaar r=" + format_double(o.r) + "\n";
    csv += "x,left,right\n";
    for (const auto& row : rows)
      csv += format_double(row.x) + "," + format_double(row.left) + "," +
             format_double(row.right) + "\n";
  }
  if (o.format == "csv") {
    emit(o, csv);
  } else {
    std::string out = "{\"schema\":\"v1\",\"parts\":[";
    for (std::size_t i = 0; i < parts_json.size(); ++i) {
      if (i) out += ",";
      out += parts_json[i];
    }
    out += "]}";
    emit(o, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heavy-tail transform analysis and tail-bound toolkit"};
  app.require_subcommand(1);
  Options o;
  std::map<std::string, Binder> binders;

  auto add_common = [&](CLI::App* sub) -> Binder& {
    Binder& b = binders[sub->get_name()];
    sub->add_option("--config", o.config_path, "flat JSON config; flags override its values");
    b.bind(sub->add_option("--output", o.output_path, "output path (default stdout)"),
           "output", &o.output_path);
    b.bind(sub->add_option("--format", o.format, "json or csv")
               ->check(CLI::IsMember({"json", "csv"})),
           "format", &o.format);
    return b;
  };
  auto add_dist = [&](CLI::App* sub, Binder& b) {
    b.bind(sub->add_option("--dist", o.dist, "pareto or zeta_diff")
               ->check(CLI::IsMember({"pareto", "zeta_diff"})),
           "dist", &o.dist);
    b.bind(sub->add_option("--r", o.r, "tail exponent"), "r", &o.r);
  };
  auto add_xgrid = [&](CLI::App* sub, Binder& b) {
    b.bind(sub->add_option("--x-min", o.x_min, "grid start"), "x_min", &o.x_min);
    b.bind(sub->add_option("--x-max", o.x_max, "grid end"), "x_max", &o.x_max);
    b.bind(sub->add_option("--points", o.points, "grid size"), "points", &o.points);
  };

  CLI::App* an = app.add_subcommand("analyze-dist", "exact tail table with log-log slopes");
  {
    Binder& b = add_common(an);
    add_dist(an, b);
    add_xgrid(an, b);
    b.bind(an->add_option("--empirical", o.empirical, "overlay an empirical tail column"),
           "empirical", &o.empirical);
    b.bind(an->add_option("--seed", o.seed, "sampler seed"), "seed", &o.seed);
  }

  CLI::App* fi = app.add_subcommand("fit-singularity",
                                    "classify the transform singularity at s = 0");
  {
    Binder& b = add_common(fi);
    add_dist(fi, b);
    b.bind(fi->add_option("--s-min", o.s_min, "sample window start"), "s_min", &o.s_min);
    b.bind(fi->add_option("--s-max", o.s_max, "sample window end"), "s_max", &o.s_max);
    b.bind(fi->add_option("--samples", o.samples, "sample count"), "samples", &o.samples);
    b.bind(fi->add_option("--order", o.order, "analytic fit order"), "order", &o.order);
    b.bind(fi->add_option("--candidates", o.candidates, "comma-separated exponents"),
           "candidates", &o.candidates);
    b.bind(fi->add_option("--quad-tol", o.quad_tol, "transform quadrature tolerance"),
           "quad_tol", &o.quad_tol);
  }

  CLI::App* ve = app.add_subcommand("verify-lemmas", "numeric property suites");
  {
    Binder& b = add_common(ve);
    b.bind(ve->add_option("--suite", o.suite, "all, signs, extremal, or correction"),
           "suite", &o.suite);
  }

  auto add_bound_params = [&](CLI::App* sub, Binder& b) {
    add_dist(sub, b);
    add_xgrid(sub, b);
    b.bind(sub->add_option("--L", o.L, "majorant order"), "L", &o.L);
    b.bind(sub->add_option("--delta", o.delta, "band width (0 = auto)"), "delta", &o.delta);
    b.bind(sub->add_option("--sigma2", o.sigma2, "comma-separated tilt schedule"), "sigma2",
           &o.sigma2);
    b.bind(sub->add_option("--quad-tol", o.quad_tol, "quadrature tolerance"), "quad_tol",
           &o.quad_tol);
    b.bind(sub->add_option("--tau-per-cell", o.tau_per_cell, "cache nodes per subinterval"),
           "tau_per_cell", &o.tau_per_cell);
  };
  CLI::App* bo = app.add_subcommand("bound",
                                    "two-sided tail bounds from the exact singular form");
  add_bound_params(bo, add_common(bo));
  CLI::App* th = app.add_subcommand(
      "theorem-check", "full pipeline: fit the singularity, bound, estimate decay");
  add_bound_params(th, add_common(th));

  CLI::App* mg = app.add_subcommand("mg1", "stationary tail of the queueing chain");
  {
    Binder& b = add_common(mg);
    b.bind(mg->add_option("--r", o.mg1_r, "service tail exponent (integer)"), "r", &o.mg1_r);
    b.bind(mg->add_option("--mean-a", o.mean_a, "increment mean, in (0,1)"), "mean_a",
           &o.mean_a);
    b.bind(mg->add_option("--N", o.chain_n, "stationary coefficients to compute"), "N",
           &o.chain_n);
    b.bind(mg->add_option("--n-b", o.n_b, "service pmf truncation (0 = 4N)"), "n_b", &o.n_b);
    b.bind(mg->add_flag("--with-oracle", o.with_oracle,
                        "also solve the truncated chain and report the gap"),
           "with_oracle", &o.with_oracle);
  }

  CLI::App* ap = app.add_subcommand("appendix", "kernel asymptotics and the slow-decay check");
  {
    Binder& b = add_common(ap);
    b.bind(ap->add_option("--which", o.which, "all, a1, a2, or korevaar"), "which", &o.which);
    b.bind(ap->add_option("--n1", o.n1, "first kernel power"), "n1", &o.n1);
    b.bind(ap->add_option("--n2", o.n2, "second kernel power"), "n2", &o.n2);
    b.bind(ap->add_option("--k", o.k_rate, "exponential rate"), "k", &o.k_rate);
    b.bind(ap->add_option("--n", o.n_pow, "kernel power"), "n", &o.n_pow);
    add_dist(ap, b);
    b.bind(ap->add_option("--x-min", o.x_min, "grid start"), "x_min", &o.x_min);
    b.bind(ap->add_option("--x-max", o.x_max, "grid end"), "x_max", &o.x_max);
    b.bind(ap->add_option("--points", o.points, "grid size"), "points", &o.points);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!o.config_path.empty())
      binders[sub->get_name()].apply(load_config(o.config_path), sub->get_name());
    if (o.format != "json" && o.format != "csv")
      throw lstail::DomainError("config: format must be json or csv");

    const std::string name = sub->get_name();
    if (name == "analyze-dist") return run_analyze(o);
    if (name == "fit-singularity") return run_fit(o);
    if (name == "verify-lemmas") return run_verify(o);
    if (name == "bound") return run_bound(o, false);
    if (name == "theorem-check") return run_bound(o, true);
    if (name == "mg1") return run_mg1(o);
    return run_appendix(o);
  } catch (const lstail::AmbiguityError& e) {
    std::fprintf(stderr,
                 "{\"schema\":\"v1\",\"error\":\"ambiguity\",\"detail\":\"%s\","
                 "\"first_r\":%s,\"second_r\":%s,\"first_residual\":%s,"
                 "\"second_residual\":%s}\n",
                 e.what(), format_double(e.first_r).c_str(),
                 format_double(e.second_r).c_str(), format_double(e.first_residual).c_str(),
                 format_double(e.second_residual).c_str());
    return 3;
  } catch (const lstail::DomainError& e) {
    std::fprintf(stderr, "{\"schema\":\"v1\",\"error\":\"domain\",\"detail\":\"%s\"}\n",
                 e.what());
    return 2;
  } catch (const lstail::Error& e) {
    std::fprintf(stderr, "{\"schema\":\"v1\",\"error\":\"numeric\",\"detail\":\"%s\"}\n",
                 e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "{\"schema\":\"v1\",\"error\":\"internal\",\"detail\":\"%s\"}\n",
                 e.what());
    return 3;
  }
}
