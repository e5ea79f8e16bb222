#include "tg/dilation.hpp"

#include <cmath>
#include <limits>

#include "tg/error.hpp"

namespace tg {

namespace {

Vector scale_about(const Chart& chart, const Vector& base, double lambda, const Vector& point) {
  return chart.exp_map(base, lambda * chart.log_map(base, point));
}

Vector flow_base(const DilationFlow& flow, const Secant& g) {
  if (flow.kind == FlowKind::Midpoint)
    return flow.chart.midpoint(flow.chart.wrap(g.x), flow.chart.wrap(g.y));
  return flow.chart.center();
}

}  // namespace

Secant dilate(const DilationFlow& flow, double lambda, const Secant& g) {
  if (!(lambda > 0)) throw Error(Errc::InvalidArgument, "dilation factor must be positive");
  if (static_cast<int>(g.x.size()) != flow.chart.dimension())
    throw Error(Errc::DimensionMismatch, "element and chart dimensions differ");
  double new_eps = lambda * g.eps;
  if (new_eps >= 1.0)
    throw Error(Errc::EpsilonOverflow, "rescaled eps leaves the domain (0, 1)");
  Vector base = flow_base(flow, g);
  return Secant{scale_about(flow.chart, base, lambda, g.x),
                scale_about(flow.chart, base, lambda, g.y), new_eps};
}

double semigroup_defect(const DilationFlow& flow, double lambda, double mu, const Secant& g) {
  Secant oneshot = dilate(flow, lambda * mu, g);
  Secant chained = dilate(flow, lambda, dilate(flow, mu, g));
  return std::max(flow.chart.distance(oneshot.x, chained.x),
                  flow.chart.distance(oneshot.y, chained.y));
}

ScalarField rescale_field(const Chart& chart, double lambda, const ScalarField& a) {
  if (chart.is_circle())
    throw Error(Errc::InvalidArgument, "rescale_field is defined on flat charts");
  if (!(lambda > 0)) throw Error(Errc::InvalidArgument, "rescale factor must be positive");
  if (chart.dimension() != a.dimension())
    throw Error(Errc::DimensionMismatch, "chart and field dimensions differ");
  std::vector<Expr> replacement;
  replacement.reserve(a.dimension());
  for (int i = 0; i < a.dimension(); ++i) {
    Expr center = Expr::constant(chart.center()[i]);
    replacement.push_back(center +
                          Expr::constant(1.0 / lambda) * (Expr::coord(i) - center));
  }
  return ScalarField(a.dimension(), Expr::constant(lambda) * substitute(a.body(), replacement));
}

double duality_defect(const DilationFlow& flow, double lambda, const Secant& v,
                      const ScalarField& a) {
  if (flow.kind != FlowKind::Endpoint)
    throw Error(Errc::InvalidArgument, "duality holds for the endpoint flow");
  ScalarField rescaled = rescale_field(flow.chart, lambda, a);
  // the dilated pairing is evaluated directly so lambda*eps may reach 1
  const Vector& base = flow.chart.center();
  Vector x = base + lambda * (v.x - base);
  Vector y = base + lambda * (v.y - base);
  double dilated_pairing = (eval(rescaled, x) - eval(rescaled, y)) / (lambda * v.eps);
  GroupoidElement g = v;
  return std::abs(dilated_pairing - pair(g, a));
}

RenormalizedLimit renormalized_limit(const DilationFlow& flow, const SecantSequence& s,
                                     double eps0, double tol) {
  if (!(eps0 > 0.0 && eps0 < 1.0))
    throw Error(Errc::EpsilonOutOfRange, "reference scale must lie in (0, 1)");
  if (s.size() < 3)
    throw Error(Errc::InvalidArgument, "renormalized_limit needs at least 3 terms");
  std::vector<Secant> rescaled;
  rescaled.reserve(s.size());
  for (const Secant& term : s.terms()) {
    rescaled.push_back(dilate(flow, eps0 / term.eps, term));
  }
  const std::size_t n = rescaled.size();
  double spread = 0.0;
  for (std::size_t i = n - 3; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      spread = std::max(spread, flow.chart.distance(rescaled[i].x, rescaled[j].x));
      spread = std::max(spread, flow.chart.distance(rescaled[i].y, rescaled[j].y));
    }
  }
  if (spread > tol) return RenormalizedLimit{std::nullopt};
  return RenormalizedLimit{rescaled.back()};
}

Secant canonical_representative(const DilationFlow& flow, const Tangent& t, double eps0) {
  if (!(eps0 > 0.0 && eps0 < 1.0))
    throw Error(Errc::EpsilonOutOfRange, "reference scale must lie in (0, 1)");
  const Chart& chart = flow.chart;
  if (flow.kind == FlowKind::Endpoint) {
    // forward difference: (f(exp_x(eps0 V)) - f(x)) / eps0
    return Secant{chart.exp_map(t.x, eps0 * t.v), chart.wrap(t.x), eps0};
  }
  // central difference about x
  Vector half = (0.5 * eps0) * t.v;
  return Secant{chart.exp_map(t.x, half), chart.exp_map(t.x, -half), eps0};
}

double renormalization_order(const DilationFlow& flow, const ScalarField& f, const Tangent& t,
                             std::span<const double> eps0_schedule) {
  if (eps0_schedule.size() < 4)
    throw Error(Errc::InvalidArgument, "order fit needs at least 4 scales");
  for (std::size_t i = 1; i < eps0_schedule.size(); ++i) {
    if (!(eps0_schedule[i] < eps0_schedule[i - 1]))
      throw Error(Errc::InvalidArgument, "eps0 schedule must be strictly decreasing");
  }
  GroupoidElement tangent = t;
  double reference = pair(tangent, f);
  std::vector<double> xs, ys;
  for (double eps0 : eps0_schedule) {
    GroupoidElement rep = canonical_representative(flow, t, eps0);
    double err = std::abs(reference - pair(rep, f));
    if (err < 1e-14) continue;  // exact representatives carry no slope information
    xs.push_back(std::log(eps0));
    ys.push_back(std::log(err));
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

double fixed_set_distance(const Chart& chart, const Secant& g) {
  return chart.distance(chart.wrap(g.x), chart.wrap(g.y)) + g.eps;
}

RGTrace rg_flow_trace(const DilationFlow& flow, const Secant& g0,
                      std::span<const double> lambda_schedule) {
  if (lambda_schedule.empty())
    throw Error(Errc::InvalidArgument, "lambda schedule must be nonempty");
  for (std::size_t i = 1; i < lambda_schedule.size(); ++i) {
    bool increasing = lambda_schedule[1] > lambda_schedule[0];
    bool step_up = lambda_schedule[i] > lambda_schedule[i - 1];
    if (lambda_schedule[i] == lambda_schedule[i - 1] || step_up != increasing)
      throw Error(Errc::InvalidArgument, "lambda schedule must be strictly monotone");
  }
  RGTrace trace;
  trace.rows.reserve(lambda_schedule.size());
  for (double lambda : lambda_schedule) {
    Secant g = dilate(flow, lambda, g0);
    double d = fixed_set_distance(flow.chart, g);
    trace.rows.push_back(RGTraceRow{lambda, std::move(g), d});
  }
  return trace;
}

}  // namespace tg
