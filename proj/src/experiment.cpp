#include "tg/experiment.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "tg/csv.hpp"
#include "tg/dilation.hpp"
#include "tg/error.hpp"
#include "tg/format.hpp"
#include "tg/groupoid.hpp"
#include "tg/kernel.hpp"
#include "tg/qcalc.hpp"
#include "tg/rng.hpp"

namespace tg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

[[noreturn]] void config_fail(const std::string& field, const std::string& what) {
  throw Error(Errc::ConfigError, field + ": " + what);
}

std::string trim_copy(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string get_param(const ExperimentConfig& cfg, const std::string& key,
                      const std::string& fallback) {
  auto it = cfg.params.find(key);
  return it == cfg.params.end() ? fallback : it->second;
}

double get_double(const ExperimentConfig& cfg, const std::string& key, double fallback) {
  auto it = cfg.params.find(key);
  if (it == cfg.params.end()) return fallback;
  try {
    return parse_double(trim_copy(it->second));
  } catch (const Error&) {
    config_fail(key, "not a number: '" + it->second + "'");
  }
}

int get_int(const ExperimentConfig& cfg, const std::string& key, int fallback) {
  double v = get_double(cfg, key, fallback);
  int n = static_cast<int>(v);
  if (static_cast<double>(n) != v) config_fail(key, "not an integer");
  return n;
}

std::vector<double> parse_list(const ExperimentConfig& cfg, const std::string& key,
                               const std::string& fallback) {
  std::string text = get_param(cfg, key, fallback);
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find(',', start);
    std::string item = trim_copy(std::string_view(text).substr(
        start, pos == std::string::npos ? std::string::npos : pos - start));
    if (!item.empty()) {
      try {
        out.push_back(parse_double(item));
      } catch (const Error&) {
        config_fail(key, "not a number: '" + item + "'");
      }
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (out.empty()) config_fail(key, "empty schedule");
  return out;
}

std::vector<double> parse_schedule(const ExperimentConfig& cfg, const std::string& key,
                                   const std::string& fallback) {
  std::vector<double> v = parse_list(cfg, key, fallback);
  for (std::size_t i = 1; i < v.size(); ++i) {
    bool increasing = v[1] > v[0];
    if (v[i] == v[i - 1] || (v[i] > v[i - 1]) != increasing)
      config_fail(key, "schedule must be strictly monotone");
  }
  return v;
}

Vector parse_point(const ExperimentConfig& cfg, const std::string& key,
                   const std::string& fallback) {
  std::vector<double> v = parse_list(cfg, key, fallback);
  Vector out(static_cast<long>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<long>(i)] = v[i];
  return out;
}

ScalarField parse_field_param(const ExperimentConfig& cfg, const std::string& key,
                              const std::string& fallback, int dimension) {
  std::string text = get_param(cfg, key, fallback);
  try {
    return parse_field(text, dimension);
  } catch (const Error& e) {
    config_fail(key, e.what());
  }
}

Observable parse_observable_param(const ExperimentConfig& cfg, const std::string& key,
                                  const std::string& fallback) {
  try {
    return Observable(parse_field(get_param(cfg, key, fallback), 2));
  } catch (const Error& e) {
    config_fail(key, e.what());
  }
}

FlowKind parse_flow(const ExperimentConfig& cfg) {
  std::string name = get_param(cfg, "flow", "endpoint");
  if (name == "endpoint") return FlowKind::Endpoint;
  if (name == "midpoint") return FlowKind::Midpoint;
  config_fail("flow", "expected 'endpoint' or 'midpoint', got '" + name + "'");
}

double require_positive(double v, const std::string& field) {
  if (!(v > 0)) config_fail(field, "must be positive");
  return v;
}

double fit_loglog_slope(const std::vector<double>& scales, const std::vector<double>& errors) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (errors[i] >= 1e-14) {
      xs.push_back(std::log(scales[i]));
      ys.push_back(std::log(errors[i]));
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::infinity();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

GroupoidElement random_element(Rng& rng, int dim) {
  Vector x(dim), y(dim);
  for (int i = 0; i < dim; ++i) {
    x[i] = rng.uniform(-1.0, 1.0);
    y[i] = rng.uniform(-1.0, 1.0);
  }
  if (rng.coin()) return make_secant(x, y, rng.uniform(0.1, 0.9));
  return make_tangent(x, y);
}

// ---------------------------------------------------------------------------

ReportSummary run_pairing(const ExperimentConfig& cfg) {
  int dim = get_int(cfg, "dim", 1);
  std::string element_text = get_param(cfg, "element", "S 1 | 0 | 0.5");
  std::string f_text = get_param(cfg, "f", "x0");
  GroupoidElement g = parse_element(element_text);
  if (element_dim(g) != dim) config_fail("element", "dimension does not match 'dim'");
  ScalarField f = parse_field_param(cfg, "f", f_text, dim);
  double value = pair(g, f);
  std::vector<CsvRow> rows{{element_text, f_text, format_double(value)}};
  emit_csv(cfg.out_path,
           "pairing of a groupoid element with a test function: tangent -> directional "
           "derivative, secant -> (f(x) - f(y))/eps",
           {"element", "f", "value"}, rows);
  return ReportSummary{cfg.kind, cfg.out_path, 1, "value", value, ""};
}

ReportSummary run_leibniz(const ExperimentConfig& cfg) {
  int dim = get_int(cfg, "dim", 1);
  int cases = get_int(cfg, "cases", 200);
  int degree = get_int(cfg, "degree", 4);
  if (cases < 1) config_fail("cases", "must be at least 1");
  Rng rng(cfg.seed);
  std::vector<CsvRow> rows;
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    GroupoidElement g = random_element(rng, dim);
    ScalarField f = random_polynomial(rng, dim, degree, -2.0, 2.0);
    ScalarField h = random_polynomial(rng, dim, degree, -2.0, 2.0);
    double defect = braided_leibniz_defect(g, f, h);
    worst = std::max(worst, std::abs(defect));
    rows.push_back({std::to_string(c), is_secant(g) ? "secant" : "tangent",
                    format_double(defect)});
  }
  emit_csv(cfg.out_path,
           "braided Leibniz defect pair(g, f*h) - f(x) pair(g, h) - h(y) pair(g, f)",
           {"case", "kind", "defect"}, rows);
  return ReportSummary{cfg.kind, cfg.out_path, cases, "max_defect", worst, ""};
}

ReportSummary run_convergence(const ExperimentConfig& cfg) {
  int k_lo = get_int(cfg, "k_lo", 4);
  int k_hi = get_int(cfg, "k_hi", 20);
  if (k_lo < 1) config_fail("k_lo", "eps = 2^-k needs k >= 1");
  if (k_hi < k_lo + 3) config_fail("k_hi", "need at least 4 terms (k_hi >= k_lo + 3)");
  ScalarField x_of_eps = parse_field_param(cfg, "x_of_eps", "2*x0", 1);
  ScalarField y_of_eps = parse_field_param(cfg, "y_of_eps", "0", 1);
  Chart chart = get_param(cfg, "chart", "flat") == "circle"
                    ? Chart::circle(require_positive(get_double(cfg, "L", kTwoPi), "L"))
                    : Chart::flat(1);

  std::vector<Secant> terms;
  std::vector<CsvRow> rows;
  for (int k = k_lo; k <= k_hi; ++k) {
    double eps = std::ldexp(1.0, -k);
    double x = eval(x_of_eps, vec1(eps));
    double y = eval(y_of_eps, vec1(eps));
    Secant s{vec1(x), vec1(y), eps};
    double quotient = chart.log_map(chart.wrap(s.y), chart.wrap(s.x))[0] / eps;
    rows.push_back({std::to_string(k), format_double(eps), format_double(x), format_double(y),
                    format_double(quotient)});
    terms.push_back(std::move(s));
  }
  SequenceLimit limit = sequence_limit(SecantSequence(std::move(terms)), chart, cfg.tol);
  emit_csv(cfg.out_path,
           "boundary pasting: a secant sequence converges when its endpoints merge and the "
           "chart difference quotients settle",
           {"k", "eps", "x", "y", "quotient"}, rows);
  if (limit.converged()) {
    return ReportSummary{cfg.kind, cfg.out_path, static_cast<int>(rows.size()), "limit_X",
                         limit.tangent->v[0], "converged"};
  }
  const char* reason = "";
  switch (*limit.reason) {
    case DivergenceReason::BasePointsDiverge: reason = "BasePointsDiverge"; break;
    case DivergenceReason::QuotientDiverges: reason = "QuotientDiverges"; break;
    case DivergenceReason::QuotientOscillates: reason = "QuotientOscillates"; break;
  }
  return ReportSummary{cfg.kind, cfg.out_path, static_cast<int>(rows.size()), "limit_X",
                       std::numeric_limits<double>::quiet_NaN(), reason};
}

ReportSummary run_rg_order(const ExperimentConfig& cfg) {
  Vector x = parse_point(cfg, "x", "0");
  Vector v = parse_point(cfg, "v", "1");
  if (x.size() != v.size()) config_fail("v", "dimension does not match 'x'");
  int dim = static_cast<int>(x.size());
  ScalarField f = parse_field_param(cfg, "f", "exp(x0)", dim);
  double eps0 = require_positive(get_double(cfg, "eps0", 0.1), "eps0");
  int steps = get_int(cfg, "steps", 5);
  if (steps < 4) config_fail("steps", "order fit needs at least 4 scales");
  DilationFlow flow{parse_flow(cfg), Chart::flat(x)};
  Tangent t = make_tangent(x, v);

  std::vector<double> schedule, errors;
  for (int k = 0; k < steps; ++k) schedule.push_back(std::ldexp(eps0, -k));
  GroupoidElement tangent = t;
  double reference = pair(tangent, f);
  std::vector<CsvRow> rows;
  for (double e0 : schedule) {
    GroupoidElement rep = canonical_representative(flow, t, e0);
    double err = std::abs(reference - pair(rep, f));
    errors.push_back(err);
    rows.push_back({format_double(e0), format_double(err), format_double(std::log(e0)),
                    format_double(std::log(err)), ""});
  }
  double slope = renormalization_order(flow, f, t, schedule);
  rows.back()[4] = format_double(slope);
  emit_csv(cfg.out_path,
           "renormalized representative pairing error against the reference scale eps0; the "
           "fitted log-log slope is the empirical convergence order",
           {"eps0", "abs_error", "log_eps0", "log_error", "fitted_slope"}, rows);
  return ReportSummary{cfg.kind, cfg.out_path, static_cast<int>(rows.size()), "order", slope, ""};
}

ReportSummary run_duality(const ExperimentConfig& cfg) {
  int dim = get_int(cfg, "dim", 1);
  int cases = get_int(cfg, "cases", 50);
  int degree = get_int(cfg, "degree", 4);
  if (cases < 1) config_fail("cases", "must be at least 1");
  std::vector<double> lambdas = parse_schedule(cfg, "lambdas", "0.25,0.5,2,4");
  for (double l : lambdas)
    if (!(l > 0)) config_fail("lambdas", "factors must be positive");
  DilationFlow flow{FlowKind::Endpoint, Chart::flat(dim)};
  Rng rng(cfg.seed);
  std::vector<CsvRow> rows;
  double worst = 0.0;
  for (double lambda : lambdas) {
    for (int c = 0; c < cases; ++c) {
      Vector y(dim);
      for (int i = 0; i < dim; ++i) y[i] = rng.uniform(-1.0, 1.0);
      Secant v = make_secant(Vector::Zero(dim), y, rng.uniform(0.05, 0.2));
      ScalarField a = random_polynomial(rng, dim, degree, -2.0, 2.0);
      double defect = duality_defect(flow, lambda, v, a);
      worst = std::max(worst, defect);
      rows.push_back({format_double(lambda), std::to_string(c), format_double(defect)});
    }
  }
  emit_csv(cfg.out_path,
           "rescaling duality pair(dilate(lambda, v), rescale(lambda, a)) = pair(v, a) for the "
           "endpoint flow about the chart center",
           {"lambda", "case", "defect"}, rows);
  return ReportSummary{cfg.kind, cfg.out_path, static_cast<int>(rows.size()), "max_defect",
                       worst, ""};
}

ReportSummary run_rg_trace(const ExperimentConfig& cfg) {
  GroupoidElement g0 = parse_element(get_param(cfg, "g0", "S 0 | 1 | 0.5"));
  if (!is_secant(g0)) config_fail("g0", "trace starts from a secant element");
  if (element_dim(g0) != 1) config_fail("g0", "trace output is one-dimensional");
  double lambda0 = require_positive(get_double(cfg, "lambda0", 1.0), "lambda0");
  double factor = require_positive(get_double(cfg, "factor", 0.5), "factor");
  if (factor == 1.0) config_fail("factor", "must differ from 1");
  int steps = get_int(cfg, "steps", 12);
  if (steps < 1) config_fail("steps", "must be at least 1");
  DilationFlow flow{parse_flow(cfg), Chart::flat(vec1(get_double(cfg, "center", 0.0)))};

  std::vector<double> schedule;
  double lambda = lambda0;
  for (int i = 0; i < steps; ++i) {
    schedule.push_back(lambda);
    lambda *= factor;
  }
  RGTrace trace = rg_flow_trace(flow, as_secant(g0), schedule);
  std::vector<CsvRow> rows;
  for (const RGTraceRow& row : trace.rows) {
    rows.push_back({format_double(row.lambda), format_double(row.element.x[0]),
                    format_double(row.element.y[0]), format_double(row.element.eps),
                    format_double(row.dist_to_fixed_set)});
  }
  emit_csv(cfg.out_path,
           "dilation flow trace with the distance d(g) = dist(x, y) + eps to the fixed-point "
           "set {[x, x, 0]}",
           {"lambda", "x", "y", "eps", "dist_to_fixed_set"}, rows);
  return ReportSummary{cfg.kind, cfg.out_path, static_cast<int>(rows.size()), "final_dist",
                       trace.rows.back().dist_to_fixed_set, ""};
}

ReportSummary run_kernel_defect(const ExperimentConfig& cfg, bool moyal) {
  int n = get_int(cfg, "N", 64);
  double L = require_positive(get_double(cfg, "L", kTwoPi), "L");
  GridSpec grid = GridSpec::make(n, L);
  Observable h1 = parse_observable_param(cfg, "h1", "sin(x0)");
  Observable h2 = parse_observable_param(cfg, "h2", moyal ? "cos(x0)" : "x1");
  std::vector<double> eps_list = parse_schedule(cfg, "eps_list", "0.2,0.1,0.05");
  for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (eps_list[i] <= eps_list[i + 1]) config_fail("eps_list", "must be strictly decreasing");
  for (double e : eps_list)
    if (!(e > 0 && e < 1)) config_fail("eps_list", "scales must lie in (0, 1)");

  std::vector<CsvRow> rows;
  std::vector<double> defects;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    double defect = moyal ? moyal_defect(h1, h2, eps_list[i], grid)
                          : classical_limit_defect(h1, h2, eps_list[i], grid);
    std::string ratio = (i == 0) ? "" : format_double(defects.back() / defect);
    defects.push_back(defect);
    rows.push_back({format_double(eps_list[i]), format_double(defect), ratio});
  }
  if (moyal) {
    emit_csv(cfg.out_path,
             "commutator defect |(1/(i eps)) [Q(h1), Q(h2)] - Q({h1, h2})| on the periodic grid",
             {"eps", "defect", "ratio"}, rows);
    return ReportSummary{cfg.kind, cfg.out_path, static_cast<int>(rows.size()), "final_defect",
                         defects.back(), ""};
  }
  emit_csv(cfg.out_path,
           "operator product defect |Q(h1) * Q(h2) - Q(h1 h2)| against eps (classical limit)",
           {"eps", "defect", "ratio"}, rows);
  bool multi = defects.size() > 1;
  double headline = multi ? defects[defects.size() - 2] / defects.back() : defects.back();
  return ReportSummary{cfg.kind, cfg.out_path, static_cast<int>(rows.size()),
                       multi ? "last_ratio" : "defect", headline, ""};
}

ReportSummary run_qcalc(const ExperimentConfig& cfg) {
  std::string mode = get_param(cfg, "mode", "lambda");
  if (mode != "lambda" && mode != "jackson")
    config_fail("mode", "expected 'lambda' or 'jackson', got '" + mode + "'");
  bool jackson = (mode == "jackson");
  double x = get_double(cfg, "x", jackson ? 1.0 : 0.0);
  ScalarField f = parse_field_param(cfg, "f", "exp(x0)", 1);
  double reference = directional_derivative(f, vec1(x), vec1(1.0));

  std::vector<double> schedule = parse_schedule(
      cfg, jackson ? "qs" : "lambdas", jackson ? "1.2,1.1,1.05,1.025" : "0.1,0.05,0.025,0.0125");
  std::vector<double> offsets, errors;
  std::vector<CsvRow> rows;
  for (double p : schedule) {
    double value = jackson ? jackson_derivative(f, x, p) : lambda_derivative(f, x, p);
    double err = std::abs(value - reference);
    offsets.push_back(jackson ? std::abs(p - 1.0) : std::abs(p));
    errors.push_back(err);
    rows.push_back({format_double(p), format_double(value), format_double(err)});
  }
  double slope = fit_loglog_slope(offsets, errors);
  emit_csv(cfg.out_path,
           jackson ? "Jackson derivative (f(qx) - f(x))/((q - 1) x) against the symbolic "
                     "derivative as q -> 1"
                   : "shift derivative (f(x + lambda) - f(x))/lambda against the symbolic "
                     "derivative as lambda -> 0",
           {jackson ? "q" : "lambda", "derivative", "abs_error"}, rows);
  return ReportSummary{cfg.kind, cfg.out_path, static_cast<int>(rows.size()), "order", slope, ""};
}

}  // namespace

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open config '" + path + "'");
  ExperimentConfig cfg;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string text = trim_copy(line);
    if (text.empty()) continue;
    std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::ConfigError,
                  path + ":" + std::to_string(lineno) + ": expected key=value");
    apply_override(cfg, trim_copy(std::string_view(text).substr(0, eq)),
                   trim_copy(std::string_view(text).substr(eq + 1)));
  }
  return cfg;
}

void apply_override(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  std::string k = trim_copy(key);
  std::string v = trim_copy(value);
  if (k.empty()) throw Error(Errc::ConfigError, "empty config key");
  if (k == "kind") {
    cfg.kind = v;
  } else if (k == "out") {
    cfg.out_path = v;
  } else if (k == "seed") {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      config_fail("seed", "not an unsigned integer: '" + v + "'");
    }
  } else if (k == "tol") {
    try {
      cfg.tol = parse_double(v);
    } catch (const Error&) {
      config_fail("tol", "not a number: '" + v + "'");
    }
    if (!(cfg.tol > 0)) config_fail("tol", "must be positive");
  } else {
    cfg.params[k] = v;
  }
}

ReportSummary run_experiment(const ExperimentConfig& cfg) {
  if (!(cfg.tol > 0)) config_fail("tol", "must be positive");
  if (cfg.out_path.empty()) config_fail("out", "missing output path");
  if (cfg.kind == "pairing") return run_pairing(cfg);
  if (cfg.kind == "leibniz") return run_leibniz(cfg);
  if (cfg.kind == "convergence") return run_convergence(cfg);
  if (cfg.kind == "rg-order") return run_rg_order(cfg);
  if (cfg.kind == "duality") return run_duality(cfg);
  if (cfg.kind == "rg-trace") return run_rg_trace(cfg);
  if (cfg.kind == "quantize-defect") return run_kernel_defect(cfg, false);
  if (cfg.kind == "moyal") return run_kernel_defect(cfg, true);
  if (cfg.kind == "qcalc") return run_qcalc(cfg);
  config_fail("kind", "unknown experiment '" + cfg.kind + "'");
}

std::string summary_line(const ReportSummary& s) {
  std::ostringstream out;
  out << "experiment=" << s.kind << " rows=" << s.rows << ' ' << s.headline_label << '='
      << format_double(s.headline);
  if (!s.note.empty()) out << " note=" << s.note;
  out << " out=" << s.out_path;
  return out.str();
}

}  // namespace tg
