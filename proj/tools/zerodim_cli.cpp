#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <zerodim/zerodim.hpp>

using namespace zerodim;
using json = nlohmann::ordered_json;

namespace {

enum exit_code { ok = 0, usage = 2, domain = 3, convergence = 4, bound_violation = 5 };

struct run_config {
  std::string subcommand;
  int k = 3;
  std::string model = "real";
  std::optional<double> lambda;
  std::optional<double> lambda_modulus;
  double lambda_arg = 0.0;
  std::optional<double> tolerance;
  std::string format = "json";
  std::string output;
  std::uint64_t seed = 1;
  bool timing = false;

  // per subcommand
  unsigned order = 10;
  int borel_order = 0;
  std::string rep = "standard";
  std::vector<std::string> reps;
  std::optional<double> max_rel_diff;
  int pade_m = 8, pade_n = 8;
  long samples = 10000;
  double lambda_min = 0.0, lambda_max = 1.0;
  int points = 11;

  model_spec model_spec_() const { return {k, parse_field_kind(model)}; }

  log_surface_point coupling() const {
    if (lambda && lambda_modulus) throw usage_error("give either --lambda or --lambda-modulus, not both");
    if (lambda) {
      if (lambda_arg != 0.0) throw usage_error("--lambda-arg goes with --lambda-modulus");
      return log_surface_point::real(*lambda);
    }
    if (lambda_modulus) return {*lambda_modulus, lambda_arg};
    throw usage_error("this subcommand needs --lambda or --lambda-modulus");
  }
};

struct table {
  std::vector<std::string> header;
  std::vector<std::vector<json>> rows;
};

struct run_output {
  json result = json::object();
  table csv;
  int code = ok;
};

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json value_json(const quadrature_estimate& q) {
  return {{"re", number(q.value.real())}, {"im", number(q.value.imag())}, {"abs_error", number(q.abs_error)}};
}

json lambda_json(const log_surface_point& L) { return {{"modulus", L.modulus()}, {"argument", L.argument()}}; }

std::vector<std::string> scan_reps(const run_config& c) {
  return c.reps.empty() ? std::vector<std::string>{c.rep} : c.reps;
}

// Resolved config: everything that determines the output.
json config_json(const run_config& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["model"] = {{"k", c.k}, {"field", c.model}};
  if (c.subcommand == "eval" || c.subcommand == "compare" || c.subcommand == "borel") {
    const auto L = c.coupling();
    j["lambda"] = lambda_json(L);
  } else {
    j["lambda"] = nullptr;
  }
  j["tolerance"] = c.tolerance ? json(*c.tolerance) : json(nullptr);
  j["format"] = c.format;
  j["output"] = c.output.empty() ? json(nullptr) : json(c.output);
  j["seed"] = c.seed;
  json o = json::object();
  if (c.subcommand == "coeffs") {
    o["order"] = c.order;
    o["borel_order"] = c.borel_order;
  } else if (c.subcommand == "eval") {
    o["rep"] = c.rep;
  } else if (c.subcommand == "compare") {
    o["reps"] = c.reps;
    o["max_rel_diff"] = c.max_rel_diff ? json(*c.max_rel_diff) : json(nullptr);
  } else if (c.subcommand == "borel") {
    o["borel_order"] = c.borel_order > 0 ? c.borel_order : c.k - 1;
    o["pade_m"] = c.pade_m;
    o["pade_n"] = c.pade_n;
  } else if (c.subcommand == "bounds") {
    o["samples"] = c.samples;
  } else if (c.subcommand == "scan") {
    o["reps"] = scan_reps(c);
    o["lambda_min"] = c.lambda_min;
    o["lambda_max"] = c.lambda_max;
    o["lambda_arg"] = c.lambda_arg;
    o["points"] = c.points;
  }
  j["options"] = o;
  return j;
}

struct evaluation {
  quadrature_estimate estimate;
  double tolerance = 0.0;
  json extra = json::object();
};

evaluation evaluate(const std::string& rep, const model_spec& m, const log_surface_point& L,
                    std::optional<double> tol) {
  evaluation e;
  if (rep == "standard") {
    e.tolerance = tol.value_or(1e-10);
    e.estimate = standard_eval(m, L, e.tolerance);
  } else if (rep == "rotated") {
    e.tolerance = tol.value_or(1e-10);
    e.estimate = rotated_eval(m, L, e.tolerance);
  } else if (rep == "improved") {
    if (m.k != 3 || m.is_real()) throw usage_error("the improved representation exists for k = 3, complex only");
    e.tolerance = tol.value_or(1e-10);
    e.estimate = improved_eval(L, e.tolerance);
  } else if (rep == "if") {
    if_options o;
    o.tolerance = tol;
    const auto r = if_eval(m, L, o);
    e.estimate = r.estimate;
    e.tolerance = tol.value_or(default_tolerance_for_dimension(r.dimension));
    e.extra = {{"epsilon", r.epsilon}, {"certified", r.certified}, {"dimension", r.dimension}};
  } else {
    throw usage_error("unknown representation '" + rep + "' (standard, rotated, if, improved)");
  }
  return e;
}

json evaluation_json(const std::string& rep, const evaluation& e) {
  json j;
  j["rep"] = rep;
  j["value"] = value_json(e.estimate);
  j["converged"] = e.estimate.converged;
  j["tolerance"] = e.tolerance;
  j["evaluations"] = e.estimate.evaluations;
  for (auto& [k, v] : e.extra.items()) j[k] = v;
  return j;
}

std::string rational_string(const rational& r) {
  std::ostringstream s;
  s << r;
  return s.str();
}

run_output cmd_coeffs(const run_config& c) {
  const auto m = c.model_spec_();
  m.validate();
  if (c.order > 200) throw usage_error("--order is capped at 200");
  auto s = partition_series(m, c.order);
  if (c.borel_order > 0) s = borel_leroy_coefficients(s, c.borel_order);
  run_output out;
  json list = json::array();
  out.csv.header = {"n", "coefficient"};
  for (std::size_t n = 0; n < s.order(); ++n) {
    list.push_back(rational_string(s.coeffs[n]));
    out.csv.rows.push_back({n, rational_string(s.coeffs[n])});
  }
  out.result["coefficients"] = list;
  return out;
}

run_output cmd_eval(const run_config& c) {
  const auto m = c.model_spec_();
  const auto L = c.coupling();
  const auto e = evaluate(c.rep, m, L, c.tolerance);
  run_output out;
  out.result = evaluation_json(c.rep, e);
  out.csv.header = {"rep", "re", "im", "abs_error", "converged", "evaluations"};
  out.csv.rows.push_back({c.rep, number(e.estimate.value.real()), number(e.estimate.value.imag()),
                          number(e.estimate.abs_error), e.estimate.converged, e.estimate.evaluations});
  if (!e.estimate.converged) out.code = convergence;
  return out;
}

run_output cmd_compare(const run_config& c) {
  if (c.reps.size() < 2) throw usage_error("--reps needs at least two representations");
  const auto m = c.model_spec_();
  const auto L = c.coupling();
  run_output out;
  json list = json::array();
  std::vector<evaluation> ev;
  for (const auto& r : c.reps) ev.push_back(evaluate(r, m, L, c.tolerance));
  double rel = 0.0;
  const double ref = std::abs(ev[0].estimate.value);
  out.csv.header = {"rep", "re", "im", "abs_error", "converged", "rel_diff"};
  for (std::size_t j = 0; j < ev.size(); ++j) {
    const double d = std::abs(ev[j].estimate.value - ev[0].estimate.value) / ref;
    rel = std::max(rel, d);
    auto ej = evaluation_json(c.reps[j], ev[j]);
    ej["rel_diff"] = number(d);
    list.push_back(ej);
    out.csv.rows.push_back({c.reps[j], number(ev[j].estimate.value.real()), number(ev[j].estimate.value.imag()),
                            number(ev[j].estimate.abs_error), ev[j].estimate.converged, number(d)});
    if (!ev[j].estimate.converged) out.code = convergence;
  }
  out.result["evaluations"] = list;
  out.result["rel_diff"] = number(rel);
  if (out.code == ok && c.max_rel_diff && !(rel <= *c.max_rel_diff)) out.code = bound_violation;
  return out;
}

run_output cmd_borel(const run_config& c) {
  const auto m = c.model_spec_();
  m.validate();
  const auto L = c.coupling();
  const int order = c.borel_order > 0 ? c.borel_order : m.k - 1;
  if (c.pade_m < 0 || c.pade_n < 0) throw usage_error("Pade degrees must be nonnegative");
  const auto series = partition_series(m, static_cast<unsigned>(c.pade_m + c.pade_n));
  const auto P = pade(to_mp(borel_leroy_coefficients(series, order)), c.pade_m, c.pade_n);
  const auto scan = pade_pole_scan(P);
  const auto f = borel_inverse(order, P, L, c.tolerance.value_or(1e-10));
  const auto z = partition_value(m, L, 1e-12);
  run_output out;
  out.result["value"] = value_json(f);
  out.result["converged"] = f.converged;
  out.result["reference"] = value_json(z);
  const double rel = std::abs(f.value - z.value) / std::abs(z.value);
  out.result["rel_diff"] = number(rel);
  json poles = json::array();
  out.csv.header = {"kind", "re", "im", "abs_error", "in_strip"};
  out.csv.rows.push_back({"value", number(f.value.real()), number(f.value.imag()), number(f.abs_error), nullptr});
  out.csv.rows.push_back({"reference", number(z.value.real()), number(z.value.imag()), number(z.abs_error), nullptr});
  for (auto p : scan.poles) {
    const bool strip = p.real() > 0.0 && std::abs(p.imag()) < scan.strip_half_width;
    poles.push_back({{"re", number(p.real())}, {"im", number(p.imag())}});
    out.csv.rows.push_back({"pole", number(p.real()), number(p.imag()), nullptr, strip});
  }
  out.result["poles"] = poles;
  out.result["strip_half_width"] = number(scan.strip_half_width);
  out.result["poles_in_strip"] = scan.in_strip.size();
  if (!f.converged) out.code = convergence;
  return out;
}

run_output cmd_bounds(const run_config& c) {
  const auto m = c.model_spec_();
  const auto r = bound_sample_check(m, c.samples, c.seed);
  run_output out;
  auto& j = out.result;
  j["max_norm"] = number(r.max_norm);
  j["bound"] = number(r.bound);
  j["violations"] = r.violations();
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["epsilon"] = number(r.epsilon);
  j["norm_violations"] = r.norm_violations;
  j["min_eigenvalue_modulus"] = number(r.min_eig_modulus);
  j["eigenvalue_floor"] = number(r.eig_floor);
  j["eigenvalue_violations"] = r.eig_violations;
  j["max_hilbert_schmidt"] = number(r.max_hs);
  j["hilbert_schmidt_bound"] = number(r.hs_bound);
  j["hilbert_schmidt_violations"] = r.hs_violations;
  j["singular"] = r.singular;
  j["worst"] = {{"lambda_modulus", number(r.worst_lambda_modulus)},
                {"lambda_argument", number(r.worst_lambda_argument)},
                {"t", r.worst_t}};
  out.csv.header = {"max_norm", "bound", "violations", "seed", "samples", "min_eigenvalue_modulus",
                    "eigenvalue_floor", "max_hilbert_schmidt", "hilbert_schmidt_bound"};
  out.csv.rows.push_back({number(r.max_norm), number(r.bound), r.violations(), r.seed, r.samples,
                          number(r.min_eig_modulus), number(r.eig_floor), number(r.max_hs), number(r.hs_bound)});
  if (r.violations() > 0) out.code = bound_violation;
  return out;
}

run_output cmd_scan(const run_config& c) {
  if (c.points < 1) throw usage_error("--points must be at least 1");
  if (c.lambda_min < 0.0 || c.lambda_max < c.lambda_min)
    throw usage_error("need 0 <= --lambda-min <= --lambda-max");
  const auto m = c.model_spec_();
  const auto reps = scan_reps(c);
  run_output out;
  out.csv.header = {"lambda_modulus", "lambda_argument"};
  for (const auto& r : reps) {
    out.csv.header.push_back(r + "_re");
    out.csv.header.push_back(r + "_im");
    out.csv.header.push_back(r + "_abs_error");
  }
  json rows = json::array();
  for (int i = 0; i < c.points; ++i) {
    const double r =
        c.points == 1 ? c.lambda_min : c.lambda_min + (c.lambda_max - c.lambda_min) * i / (c.points - 1);
    const log_surface_point L(r, c.lambda_arg);
    json row;
    row["lambda"] = lambda_json(L);
    std::vector<json> cells{r, c.lambda_arg};
    json vals = json::object();
    for (const auto& rep : reps) {
      const auto e = evaluate(rep, m, L, c.tolerance);
      vals[rep] = value_json(e.estimate);
      cells.push_back(number(e.estimate.value.real()));
      cells.push_back(number(e.estimate.value.imag()));
      cells.push_back(number(e.estimate.abs_error));
      if (!e.estimate.converged) out.code = convergence;
    }
    row["values"] = vals;
    rows.push_back(row);
    out.csv.rows.push_back(cells);
  }
  out.result["rows"] = rows;
  return out;
}

std::string csv_cell(const json& v) {
  std::string s;
  if (v.is_null())
    s = "";
  else if (v.is_string())
    s = v.get<std::string>();
  else
    s = v.dump();
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string render(const run_config& c, const run_output& out, std::optional<double> seconds) {
  json cfg = config_json(c);
  if (c.format == "json") {
    json doc;
    doc["config"] = cfg;
    doc["result"] = out.result;
    doc["exit_code"] = out.code;
    if (seconds) doc["timing"] = {{"seconds", *seconds}};
    return doc.dump(2) + "\n";
  }
  std::ostringstream s;
  s << "# config " << cfg.dump() << "\n";
  s << "# exit_code " << out.code << "\n";
  if (seconds) s << "# timing_seconds " << *seconds << "\n";
  for (std::size_t j = 0; j < out.csv.header.size(); ++j) s << (j ? "," : "") << csv_cell(out.csv.header[j]);
  s << "\r\n";
  for (const auto& row : out.csv.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) s << (j ? "," : "") << csv_cell(row[j]);
    s << "\r\n";
  }
  return s.str();
}

void add_common(CLI::App* sub, run_config& c, bool needs_lambda) {
  sub->add_option("--k", c.k, "interaction degree 2k (k >= 2)");
  sub->add_option("--model", c.model, "real (phi^{2k}) or complex ((phibar phi)^k)")
      ->check(CLI::IsMember({"real", "complex"}));
  if (needs_lambda) {
    sub->add_option("--lambda", c.lambda, "coupling on the principal sheet (negative means argument pi)");
    sub->add_option("--lambda-modulus", c.lambda_modulus, "coupling modulus")->check(CLI::NonNegativeNumber);
    sub->add_option("--lambda-arg", c.lambda_arg, "coupling argument, never wrapped");
  }
  sub->add_option("--tolerance", c.tolerance, "absolute quadrature tolerance")
      ->envname("ZERODIM_TOLERANCE")
      ->check(CLI::PositiveNumber);
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("-o,--output", c.output, "output file (default stdout)");
  sub->add_flag("--timing", c.timing, "add wall-clock seconds to the output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zerodim: zero-dimensional phi^{2k} partition functions"};
  app.require_subcommand(1);
  run_config c;

  auto* coeffs = app.add_subcommand("coeffs", "exact perturbative coefficients");
  add_common(coeffs, c, false);
  coeffs->add_option("--order", c.order, "highest order n (<= 200)");
  coeffs->add_option("--borel-order", c.borel_order, "divide by (order n)! (0: plain coefficients)")
      ->check(CLI::NonNegativeNumber);

  auto* eval = app.add_subcommand("eval", "evaluate Z(lambda) in one representation");
  add_common(eval, c, true);
  eval->add_option("--rep", c.rep, "standard, rotated, if or improved");

  auto* compare = app.add_subcommand("compare", "evaluate several representations and compare");
  add_common(compare, c, true);
  compare->add_option("--reps", c.reps, "comma separated representations")->delimiter(',')->required();
  compare->add_option("--max-rel-diff", c.max_rel_diff, "exit 5 when the relative difference exceeds this");

  auto* borel = app.add_subcommand("borel", "Borel-Leroy Pade resummation");
  add_common(borel, c, true);
  borel->add_option("--borel-order", c.borel_order, "Borel-Leroy order (default k-1)")->check(CLI::NonNegativeNumber);
  borel->add_option("--pade-m", c.pade_m, "numerator degree");
  borel->add_option("--pade-n", c.pade_n, "denominator degree");

  auto* bounds = app.add_subcommand("bounds", "sampled resolvent bound check");
  add_common(bounds, c, false);
  bounds->add_option("--samples", c.samples, "number of samples");
  bounds->add_option("--seed", c.seed, "random seed");

  auto* scan = app.add_subcommand("scan", "evaluate on a grid of coupling moduli");
  add_common(scan, c, false);
  scan->add_option("--rep", c.rep, "representation (or use --reps)");
  scan->add_option("--reps", c.reps, "comma separated representations")->delimiter(',');
  scan->add_option("--lambda-min", c.lambda_min, "smallest modulus");
  scan->add_option("--lambda-max", c.lambda_max, "largest modulus");
  scan->add_option("--lambda-arg", c.lambda_arg, "common argument");
  scan->add_option("--points", c.points, "number of grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  try {
    const auto t0 = std::chrono::steady_clock::now();
    run_output out;
    if (c.subcommand == "coeffs") out = cmd_coeffs(c);
    else if (c.subcommand == "eval") out = cmd_eval(c);
    else if (c.subcommand == "compare") out = cmd_compare(c);
    else if (c.subcommand == "borel") out = cmd_borel(c);
    else if (c.subcommand == "bounds") out = cmd_bounds(c);
    else out = cmd_scan(c);
    std::optional<double> seconds;
    if (c.timing) seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto text = render(c, out, seconds);
    if (c.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(c.output, std::ios::binary);
      if (!f) throw usage_error("cannot open output file " + c.output);
      f << text;
    }
    return out.code;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return usage;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return domain;
  } catch (const convergence_error& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return convergence;
  }
}
