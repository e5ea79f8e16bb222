#pragma once

#include <span>
#include <vector>

#include "tg/chart.hpp"
#include "tg/groupoid.hpp"

namespace tg {

enum class FlowKind { Endpoint, Midpoint };

/// Dilation structure tau_lambda on SM. Both kinds rescale the pair of
/// endpoints about a base point and multiply eps by lambda:
///   Endpoint: base = the chart center (elements anchored there keep that
///             slot fixed, the other endpoint scales away from it);
///   Midpoint: base = the chord midpoint of the element's own endpoints.
struct DilationFlow {
  FlowKind kind;
  Chart chart;
};

/// tau_lambda(g); eps scales to exactly lambda * eps. Throws EpsilonOverflow
/// when lambda * eps >= 1.
Secant dilate(const DilationFlow& flow, double lambda, const Secant& g);

/// Max endpoint distance between dilate(lambda*mu, g) and
/// dilate(lambda, dilate(mu, g)); zero on flat charts.
double semigroup_defect(const DilationFlow& flow, double lambda, double mu, const Secant& g);

/// Dual rescaling on functions: (tau*_lambda a)(x) = lambda * a(c + (x-c)/lambda)
/// realized symbolically about the chart center c. Flat charts only.
ScalarField rescale_field(const Chart& chart, double lambda, const ScalarField& a);

/// |pair(tau_lambda v, tau*_lambda a) - pair(v, a)|. The rescaled pairing is
/// evaluated arithmetically, so lambda * eps may leave (0,1) freely.
/// Identically zero for the Endpoint flow on a flat chart centered at the
/// slot of v the flow keeps fixed.
double duality_defect(const DilationFlow& flow, double lambda, const Secant& v,
                      const ScalarField& a);

struct RenormalizedLimit {
  std::optional<Secant> value;  // set iff the rescaled terms settled
  bool converged() const { return value.has_value(); }
};

/// Applies tau_{eps0/eps_n} to every term of a bare sequence and returns the
/// SM limit when the last three rescaled terms agree within tol.
RenormalizedLimit renormalized_limit(const DilationFlow& flow, const SecantSequence& s,
                                     double eps0, double tol);

/// Secant representative of a tangent at reference scale eps0, chosen so the
/// pairing is the forward (Endpoint) or central (Midpoint) difference:
///   Endpoint: [exp_x(eps0 V), x, eps0]
///   Midpoint: [exp_x(eps0 V / 2), exp_x(-eps0 V / 2), eps0]
Secant canonical_representative(const DilationFlow& flow, const Tangent& t, double eps0);

/// Least-squares slope of log |pair(t,f) - pair(representative(eps0), f)|
/// against log eps0: the empirical convergence order. Errors below 1e-14 are
/// dropped from the fit; returns +infinity when fewer than two points remain.
double renormalization_order(const DilationFlow& flow, const ScalarField& f, const Tangent& t,
                             std::span<const double> eps0_schedule);

/// Distance to the fixed-point set {[x,x,0]}: dist(x, y) + eps.
double fixed_set_distance(const Chart& chart, const Secant& g);

struct RGTraceRow {
  double lambda;
  Secant element;
  double dist_to_fixed_set;
};

struct RGTrace {
  std::vector<RGTraceRow> rows;
};

/// Dilates g0 by every lambda in the (strictly monotone) schedule and records
/// the distance to the fixed-point set.
RGTrace rg_flow_trace(const DilationFlow& flow, const Secant& g0,
                      std::span<const double> lambda_schedule);

}  // namespace tg
