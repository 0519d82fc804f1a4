#include "lstail/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "lstail/error.hpp"

namespace lstail::io {

namespace {

using nlohmann::json;

json parse_checked(const std::string& text, const char* what,
                   std::initializer_list<const char*> keys) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw DomainError(std::string(what) + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) throw DomainError(std::string(what) + ": expected a JSON object");
  if (j.value("schema", "") != "v1")
    throw DomainError(std::string(what) + ": missing or unsupported schema");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = std::string(it.key()) == "schema";
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw DomainError(std::string(what) + ": unknown key '" + it.key() + "'");
  }
  for (const char* k : keys)
    if (!j.contains(k)) throw DomainError(std::string(what) + ": missing key '" + k + "'");
  return j;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string num_array(std::span<const double> v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out + "]";
}

std::vector<double> num_vector(const json& j, const char* what) {
  if (!j.is_array()) throw DomainError(std::string(what) + ": expected an array");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw DomainError(std::string(what) + ": non-numeric array entry");
    v.push_back(e.get<double>());
  }
  return v;
}

double num_field(const json& j, const char* key, const char* what) {
  if (!j.at(key).is_number())
    throw DomainError(std::string(what) + ": field '" + key + "' must be numeric");
  return j.at(key).get<double>();
}

const char* form_kind_name(SingularityForm::Kind k) {
  return k == SingularityForm::Kind::power_log ? "power_log" : "pure_power";
}

SingularityForm::Kind form_kind_from(const std::string& name, const char* what) {
  if (name == "power_log") return SingularityForm::Kind::power_log;
  if (name == "pure_power") return SingularityForm::Kind::pure_power;
  throw DomainError(std::string(what) + ": unknown kind '" + name + "'");
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<double> split_fields(const std::string& line, std::size_t want, const char* what) {
  std::vector<double> out;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(cell, &pos);
    } catch (const std::exception&) {
      throw DomainError(std::string(what) + ": non-numeric cell '" + cell + "'");
    }
    out.push_back(v);
    (void)pos;
  }
  if (out.size() != want)
    throw DomainError(std::string(what) + ": expected " + std::to_string(want) +
                      " fields per row");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_json(const Distribution& d) {
  std::string out = "{\"schema\":\"v1\",\"kind\":\"";
  out += d.kind_name();
  out += "\",\"r\":" + format_double(d.r) + "}";
  return out;
}

Distribution distribution_from_json(const std::string& text) {
  json j = parse_checked(text, "distribution", {"kind", "r"});
  std::string kind = j.at("kind").get<std::string>();
  double r = num_field(j, "r", "distribution");
  if (kind == "pareto") return make_pareto(r);
  if (kind == "zeta_diff") {
    long long ri = std::llround(r);
    if (std::abs(r - static_cast<double>(ri)) > 1e-9)
      throw DomainError("distribution: zeta_diff needs an integer r");
    return make_zeta_difference(static_cast<int>(ri));
  }
  throw DomainError("distribution: unknown kind '" + kind + "'");
}

std::string to_json(const SingularityForm& f) {
  std::string out = "{\"schema\":\"v1\",\"kind\":\"";
  out += form_kind_name(f.kind);
  out += "\",\"r\":" + format_double(f.r);
  out += ",\"alpha\":" + num_array(f.alpha);
  out += ",\"beta\":" + num_array(f.beta) + "}";
  return out;
}

SingularityForm form_from_json(const std::string& text) {
  json j = parse_checked(text, "singularity form", {"kind", "r", "alpha", "beta"});
  SingularityForm f;
  f.kind = form_kind_from(j.at("kind").get<std::string>(), "singularity form");
  f.r = num_field(j, "r", "singularity form");
  f.alpha = num_vector(j.at("alpha"), "singularity form alpha");
  f.beta = num_vector(j.at("beta"), "singularity form beta");
  if (!(f.r > 0.0) || f.alpha.empty())
    throw DomainError("singularity form: needs r > 0 and a leading alpha");
  return f;
}

std::string to_json(const CorrectionPair& p) {
  std::string out = "{\"schema\":\"v1\",\"kind\":\"";
  out += form_kind_name(p.form.kind);
  out += "\",\"r\":" + format_double(p.form.r);
  out += ",\"L\":" + std::to_string(p.L);
  out += ",\"g\":" + num_array(p.g);
  out += ",\"tilde_beta\":" + num_array(p.tilde_beta);
  out += ",\"d\":" + num_array(p.d) + "}";
  return out;
}

CorrectionPair pair_from_json(const std::string& text) {
  json j = parse_checked(text, "correction pair", {"kind", "r", "L", "g", "tilde_beta", "d"});
  CorrectionPair p;
  p.form.kind = form_kind_from(j.at("kind").get<std::string>(), "correction pair");
  p.form.r = num_field(j, "r", "correction pair");
  double Ld = num_field(j, "L", "correction pair");
  p.L = static_cast<int>(std::llround(Ld));
  p.g = num_vector(j.at("g"), "correction pair g");
  p.tilde_beta = num_vector(j.at("tilde_beta"), "correction pair tilde_beta");
  p.d = num_vector(j.at("d"), "correction pair d");
  const std::size_t L = static_cast<std::size_t>(p.L);
  if (p.L < 1 || p.g.size() != L || p.tilde_beta.size() != L || p.d.size() != L)
    throw DomainError("correction pair: g, tilde_beta, d must each hold L entries");

  // alpha and beta are determined by (g, tilde_beta, d); rebuild them so the
  // pair round-trips into a form usable by the bound machinery.
  p.form.alpha.resize(L);
  p.form.beta.resize(L);
  const bool plog = p.form.kind == SingularityForm::Kind::power_log;
  const int ri = static_cast<int>(std::llround(p.form.r));
  if (plog && std::abs(p.form.r - static_cast<double>(ri)) > 1e-9)
    throw DomainError("correction pair: power_log needs an integer r");
  for (std::size_t k = 0; k < L; ++k) {
    double c = plog ? power_log_coefficient(ri + static_cast<int>(k))
                    : pure_power_coefficient(p.form.r + static_cast<double>(k));
    p.form.alpha[k] = p.g[k] * c;
  }
  for (std::size_t m = 0; m < L; ++m) {
    double acc = p.tilde_beta[m];
    for (std::size_t k = 0; k < L; ++k)
      acc += p.d[k] * std::pow(-1.0 / static_cast<double>(k + 1), static_cast<double>(m));
    p.form.beta[m] = acc;
  }
  return p;
}

std::string to_json(const BoundReport& r) {
  std::string out = "{\"schema\":\"v1\"";
  out += ",\"x\":" + num_array(r.x);
  out += ",\"lower\":" + num_array(r.lower);
  out += ",\"upper\":" + num_array(r.upper);
  out += ",\"tail_exact\":" + num_array(r.tail_exact);
  out += ",\"scaled_lower\":" + num_array(r.scaled_lower);
  out += ",\"scaled_upper\":" + num_array(r.scaled_upper);
  out += ",\"r_used\":" + format_double(r.r_used);
  out += ",\"eta_lower\":" + format_double(r.eta_lower);
  out += ",\"eta_upper\":" + format_double(r.eta_upper);
  out += ",\"eta_exact\":" + format_double(r.eta_exact);
  out += ",\"fit_alpha0\":" + format_double(r.fit_alpha0);
  out += ",\"fit_residual\":" + format_double(r.fit_residual);
  out += std::string(",\"sign_check_passed\":") + (r.sign_check_passed ? "true" : "false");
  out += std::string(",\"sandwich_ok\":") + (r.sandwich_ok ? "true" : "false");
  out += ",\"notes\":\"" + escape(r.notes) + "\"}";
  return out;
}

std::string bound_report_csv(const BoundReport& r) {
  std::string out = "x,lower,upper,tail_exact,scaled_lower,scaled_upper\n";
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    out += format_double(r.x[i]) + "," + format_double(r.lower[i]) + "," +
           format_double(r.upper[i]) + "," + format_double(r.tail_exact[i]) + "," +
           format_double(r.scaled_lower[i]) + "," + format_double(r.scaled_upper[i]) + "\n";
  }
  return out;
}

std::string to_json(const Mg1Report& r) {
  std::string out = "{\"schema\":\"v1\"";
  out += ",\"eta_pi\":" + format_double(r.eta_pi);
  out += ",\"eta_b\":" + format_double(r.eta_b);
  out += ",\"pi0\":" + format_double(r.pi0);
  out += ",\"mass\":" + format_double(r.mass);
  out += std::string(",\"verdict\":") + (r.verdict ? "true" : "false") + "}";
  return out;
}

std::string mg1_csv(const Mg1Report& r) {
  std::string out = "n,pi\n";
  for (std::size_t n = 0; n < r.pi.size(); ++n)
    out += std::to_string(n) + "," + format_double(r.pi[n]) + "\n";
  return out;
}

std::string samples_csv(const std::vector<TransformSample>& samples) {
  std::string out = "sigma,tau,re,im\n";
  for (const auto& s : samples) {
    out += format_double(s.sigma) + "," + format_double(s.tau) + "," +
           format_double(s.value.real()) + "," + format_double(s.value.imag()) + "\n";
  }
  return out;
}

std::vector<TransformSample> samples_from_csv(const std::string& text) {
  std::vector<TransformSample> out;
  for (const std::string& line : split_lines(text)) {
    if (line.rfind("sigma", 0) == 0 || line[0] == '#') continue;
    std::vector<double> v = split_fields(line, 4, "transform samples");
    out.push_back({v[0], v[1], cplx(v[2], v[3])});
  }
  return out;
}

std::string grid_csv(const GridFunction& g) {
  std::string out = "# start=" + format_double(g.start) + " step=" + format_double(g.step) +
                    " n=" + std::to_string(g.values.size()) + "\n";
  out += "t,re,im\n";
  for (std::size_t j = 0; j < g.values.size(); ++j) {
    double t = g.start + static_cast<double>(j) * g.step;
    out += format_double(t) + "," + format_double(g.values[j].real()) + "," +
           format_double(g.values[j].imag()) + "\n";
  }
  return out;
}

GridFunction grid_from_csv(const std::string& text) {
  std::vector<std::string> lines = split_lines(text);
  if (lines.empty() || lines[0][0] != '#')
    throw DomainError("grid: missing '# start= step= n=' header");
  GridFunction g;
  std::size_t count = 0;
  if (std::sscanf(lines[0].c_str(), "# start=%lf step=%lf n=%zu", &g.start, &g.step, &count) !=
      3)
    throw DomainError("grid: malformed header line");
  if (!(g.step > 0.0) || count == 0) throw DomainError("grid: header needs step > 0 and n > 0");
  g.values.reserve(count);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].rfind("t,", 0) == 0) continue;
    std::vector<double> v = split_fields(lines[i], 3, "grid");
    g.values.emplace_back(v[1], v[2]);
  }
  if (g.values.size() != count)
    throw DomainError("grid: row count does not match the header");
  return g;
}

}  // namespace lstail::io
