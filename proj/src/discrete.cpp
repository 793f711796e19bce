#include "relgeo/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "relgeo/errors.hpp"

namespace relgeo {

namespace {

constexpr double kNormalizedTolerance = 1e-12;

// Both momenta share the form m(1+w^2/4)w + w/4|v|^2 + v.Jc + sign * w/2 v.c.
double projected_momentum(double m, const Vec2& c, double omega, const Vec2& v, double sign) {
  return m * (1.0 + 0.25 * omega * omega) * omega + 0.25 * omega * squared_norm(v) + dot(v, apply_j(c)) +
         sign * 0.5 * omega * dot(v, c);
}

MomentumLinearization projected_linearization(double m, const Vec2& c, double omega, const Vec2& v,
                                              double sign) {
  MomentumLinearization lin;
  lin.d_omega = m * (1.0 + 0.75 * omega * omega) + 0.25 * squared_norm(v) + sign * 0.5 * dot(v, c);
  lin.d_v = 0.5 * omega * v + apply_j(c) + sign * 0.5 * omega * c;
  return lin;
}

struct StepFunction {
  const DiscreteCurve& c0;
  const DiscreteCurve& c1;
  const Metric& metric;
  std::size_t k;
  double theta;
  double target;

  double value(double omega) const {
    const Vec2 v = velocity_from_omega(b_vector(c0, c1, k, theta, omega), omega);
    return outgoing_momentum(metric, c0[k], omega, v) - target;
  }

  double derivative(double omega) const {
    const Vec2 v = velocity_from_omega(b_vector(c0, c1, k, theta, omega), omega);
    const MomentumLinearization lin = outgoing_linearization(metric, c0[k], omega, v);
    const VelocitySensitivity sens = velocity_sensitivity(c0, c1, k, theta, omega);
    return lin.d_omega + dot(lin.d_v, sens.d_omega);
  }
};

double converged_step(double omega, double tol) {
  return std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(omega));
}

// Safeguarded Newton inside a sign-change bracket [lo, hi].
double refine_bracket(const StepFunction& f, double lo, double hi, double f_lo, const IntegrateOptions& opt) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const double fx = f.value(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
    }
    const double df = f.derivative(x);
    double next = x - fx / df;
    if (!std::isfinite(next) || next <= std::min(lo, hi) || next >= std::max(lo, hi)) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - x) <= converged_step(next, opt.root_tolerance) ||
        std::abs(hi - lo) <= converged_step(x, opt.root_tolerance)) {
      return next;
    }
    x = next;
  }
  return x;
}

struct Sample {
  double omega;
  double value;
};

// First sign change met while walking away from `start` on both sides.
bool nearest_bracket(const StepFunction& f, double start, const IntegrateOptions& opt, Sample& a, Sample& b) {
  const Sample s0{start, f.value(start)};
  Sample left = s0;
  Sample right = s0;
  double width = 0.0;
  double grow = 0.25;
  while (width < opt.max_abs_omega + std::abs(start)) {
    width += grow;
    grow = std::min(2.0 * grow, 2.0);
    const Sample r{start + width, f.value(start + width)};
    const Sample l{start - width, f.value(start - width)};
    const bool sign_r = std::isfinite(r.value) && (r.value < 0.0) != (right.value < 0.0);
    const bool sign_l = std::isfinite(l.value) && (l.value < 0.0) != (left.value < 0.0);
    if (sign_r || sign_l) {
      // Both sides may change sign within one ring; keep the smaller |f| end as a tiebreak.
      if (sign_r && (!sign_l || std::abs(r.value) + std::abs(right.value) <=
                                    std::abs(l.value) + std::abs(left.value))) {
        a = right;
        b = r;
      } else {
        a = l;
        b = left;
      }
      return true;
    }
    right = r;
    left = l;
  }
  return false;
}

// Does f change sign strictly between `from` and `root`, excluding a small
// neighbourhood of the root itself?
bool closer_root(const StepFunction& f, double from, double root, const IntegrateOptions& opt, Sample& a,
                 Sample& b) {
  constexpr int kPieces = 16;
  const double span = root - from;
  if (std::abs(span) <= converged_step(root, opt.root_tolerance) * 16.0) return false;
  Sample prev{from, f.value(from)};
  if (prev.value == 0.0) {
    a = b = prev;
    return true;
  }
  for (int i = 1; i < kPieces; ++i) {
    const double w = from + span * static_cast<double>(i) / kPieces;
    const Sample cur{w, f.value(w)};
    if (std::isfinite(cur.value) && (cur.value < 0.0) != (prev.value < 0.0)) {
      a = prev;
      b = cur;
      return true;
    }
    prev = cur;
  }
  return false;
}

}  // namespace

void require_same_length(const DiscreteCurve& c0, const DiscreteCurve& c1) {
  if (c0.size() != c1.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("curves have {} and {} points", c0.size(), c1.size()));
  }
}

Vec2 b_vector(const DiscreteCurve& c0, const DiscreteCurve& c1, std::size_t k, double theta_k, double omega_k) {
  return rotation(-theta_k) * (c1[k + 1] - c1[k]) - cayley_rotation(omega_k) * c0[k + 1] + c0[k];
}

Vec2 velocity_from_omega(const Vec2& b, double omega) { return b_matrix(omega) * b; }

double outgoing_momentum(const Metric& metric, const Vec2& c, double omega, const Vec2& v) {
  return projected_momentum(metric.m(), c, omega, v, -1.0);
}

double incoming_momentum(const Metric& metric, const Vec2& c, double omega, const Vec2& v) {
  return projected_momentum(metric.m(), c, omega, v, 1.0);
}

MomentumLinearization outgoing_linearization(const Metric& metric, const Vec2& c, double omega, const Vec2& v) {
  return projected_linearization(metric.m(), c, omega, v, -1.0);
}

MomentumLinearization incoming_linearization(const Metric& metric, const Vec2& c, double omega, const Vec2& v) {
  return projected_linearization(metric.m(), c, omega, v, 1.0);
}

VelocitySensitivity velocity_sensitivity(const DiscreteCurve& c0, const DiscreteCurve& c1, std::size_t k,
                                         double theta_k, double omega_k) {
  // v = B b, dB/dw = J/2 and -B dR^/dw = J A, so
  // dv/dw = J (b/2 + A c0_{k+1}) and dv/dtheta = B R_{-theta} J (c1_{k+1} - c1_k).
  const Vec2 b = b_vector(c0, c1, k, theta_k, omega_k);
  VelocitySensitivity s;
  s.d_omega = apply_j(0.5 * b + a_matrix(omega_k) * c0[k + 1]);
  s.d_theta = b_matrix(omega_k) * (rotation(-theta_k) * apply_j(c1[k + 1] - c1[k]));
  return s;
}

double eom_residual(const Metric& metric, const DiscreteCurve& c0, std::size_t k, double omega_k,
                    const Vec2& v_k, double omega_prev, const Vec2& v_prev) {
  return outgoing_momentum(metric, c0[k], omega_k, v_k) - incoming_momentum(metric, c0[k], omega_prev, v_prev);
}

namespace {

StepUpdate solve_node(const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric, std::size_t k,
                      double theta, double omega_prev, double target, const IntegrateOptions& opt) {
  const StepFunction f{c0, c1, metric, k, theta, target};

  auto finish = [&](double omega) {
    if (!std::isfinite(omega) || std::abs(omega) > opt.max_abs_omega) {
      throw IndexedError(ErrorKind::kRootFindFailed, k, "step root left the admissible range");
    }
    return StepUpdate{omega, velocity_from_omega(b_vector(c0, c1, k, theta, omega), omega)};
  };

  double omega = omega_prev;
  bool converged = false;
  for (int it = 0; it < opt.max_newton_iterations; ++it) {
    const double fx = f.value(omega);
    const double df = f.derivative(omega);
    if (fx == 0.0) {
      converged = true;
      break;
    }
    const double delta = fx / df;
    if (!std::isfinite(delta)) break;
    omega -= delta;
    if (std::abs(omega) > opt.max_abs_omega) break;
    if (std::abs(delta) <= converged_step(omega, opt.root_tolerance)) {
      converged = true;
      break;
    }
  }

  Sample a{};
  Sample b{};
  if (converged && std::isfinite(omega)) {
    if (!closer_root(f, omega_prev, omega, opt, a, b)) return finish(omega);
  } else if (!nearest_bracket(f, omega_prev, opt, a, b)) {
    throw IndexedError(ErrorKind::kRootFindFailed, k, "no root of the step equation was bracketed");
  }
  if (a.value == 0.0) return finish(a.omega);
  if (b.value == 0.0) return finish(b.omega);
  double lo = a.omega;
  double hi = b.omega;
  double f_lo = a.value;
  if (lo > hi) {
    std::swap(lo, hi);
    f_lo = b.value;
  }
  return finish(refine_bracket(f, lo, hi, f_lo, opt));
}

}  // namespace

StepResult step(const StepState& state, const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric,
                const IntegrateOptions& options) {
  require_same_length(c0, c1);
  if (state.k >= c0.intervals()) {
    throw Error(ErrorKind::kInvalidArgument, "step index is past the last interval");
  }
  const double target = incoming_momentum(metric, c0[state.k], state.omega_prev, state.v_prev);
  const StepUpdate up =
      solve_node(c0, c1, metric, state.k, state.theta, state.omega_prev, target, options);
  StepState next;
  next.k = state.k + 1;
  next.theta = state.theta + 2.0 * std::atan(0.5 * up.omega);
  next.omega_prev = up.omega;
  next.v_prev = up.v;
  return {up, next};
}

LeftBoundary init_leftmost(const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric,
                           double theta0, const IntegrateOptions& options) {
  require_same_length(c0, c1);
  StepUpdate first;
  if (options.start == StartCondition::kOrigin) {
    if (norm(c0[0]) > kNormalizedTolerance || norm(c1[0]) > kNormalizedTolerance) {
      throw Error(ErrorKind::kNotNormalized, "both curves must start at the origin");
    }
    first.omega = 0.0;
    first.v = b_vector(c0, c1, 0, theta0, 0.0);
  } else {
    first = solve_node(c0, c1, metric, 0, theta0, 0.0, 0.0, options);
  }
  StepState next;
  next.k = 1;
  next.theta = theta0 + 2.0 * std::atan(0.5 * first.omega);
  next.omega_prev = first.omega;
  next.v_prev = first.v;
  return {first, next};
}

double terminal_residual(const GeodesicPath& path, const DiscreteCurve& c0, const Metric& metric) {
  const std::size_t n = path.intervals();
  if (n == 0 || c0.intervals() != n) throw Error(ErrorKind::kInvalidArgument, "path and curve lengths differ");
  return incoming_momentum(metric, c0[n], path.omega[n - 1], path.v[n - 1]);
}

double path_energy(const std::vector<double>& omega, const std::vector<Vec2>& v, const Metric& metric) {
  double sum = 0.0;
  for (std::size_t k = 0; k < omega.size(); ++k) sum += metric.m() * omega[k] * omega[k] + squared_norm(v[k]);
  return 0.5 * static_cast<double>(omega.size()) * sum;
}

GeodesicPath integrate(const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric, double theta0,
                       const IntegrateOptions& options) {
  require_same_length(c0, c1);
  const std::size_t n = c0.intervals();
  GeodesicPath path;
  path.theta.reserve(n + 1);
  path.omega.reserve(n);
  path.v.reserve(n);

  const LeftBoundary lb = init_leftmost(c0, c1, metric, theta0, options);
  path.theta.push_back(theta0);
  path.omega.push_back(lb.first.omega);
  path.v.push_back(lb.first.v);
  StepState state = lb.next;
  path.theta.push_back(state.theta);
  while (state.k < n) {
    const StepResult r = step(state, c0, c1, metric, options);
    path.omega.push_back(r.update.omega);
    path.v.push_back(r.update.v);
    state = r.next;
    path.theta.push_back(state.theta);
  }

  path.x.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) path.x[k] = c1[k] - rotation(path.theta[k]) * c0[k];
  path.energy = path_energy(path.omega, path.v, metric);
  return path;
}

PathDiagnostics diagnose(const GeodesicPath& path, const DiscreteCurve& c0, const DiscreteCurve& c1) {
  PathDiagnostics d;
  const std::size_t n = path.intervals();
  for (std::size_t k = 0; k <= n; ++k) {
    d.admissibility_error =
        std::max(d.admissibility_error, norm(rotation(path.theta[k]) * c0[k] + path.x[k] - c1[k]));
  }
  for (std::size_t k = 0; k < n; ++k) {
    const GroupElement gk{path.theta[k], path.x[k]};
    const GroupElement gk1{path.theta[k + 1], path.x[k + 1]};
    const GroupElement rel = compose(inverse(gk), gk1);
    const GroupElement cay = cayley({path.omega[k], path.v[k]});
    d.cayley_error = std::max(d.cayley_error, std::abs(path.theta[k + 1] - path.theta[k] - cay.theta));
    d.update_error = std::max(d.update_error, norm(rel.x - cay.x));
  }
  return d;
}

}  // namespace relgeo
