#include "relgeo/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace relgeo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSingular = 1e-14;

double angular_distance(double a, double b) {
  const double d = std::abs(wrap_two_pi(a) - wrap_two_pi(b));
  return std::min(d, kTwoPi - d);
}

// Solves lin_out . (domega, dv) = rhs with dv = s.d_omega domega + s.d_theta dtheta.
VariationState solve_node_variation(const GeodesicPath& path, std::size_t k, double dtheta, double rhs,
                                    const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric) {
  const MomentumLinearization lin = outgoing_linearization(metric, c0[k], path.omega[k], path.v[k]);
  const VelocitySensitivity sens = velocity_sensitivity(c0, c1, k, path.theta[k], path.omega[k]);
  const double coef = lin.d_omega + dot(lin.d_v, sens.d_omega);
  if (!(std::abs(coef) >= kSingular)) {
    throw IndexedError(ErrorKind::kSingularVariation, k, "first-variation equation is degenerate");
  }
  VariationState out;
  out.dtheta = dtheta;
  out.domega = (rhs - dot(lin.d_v, sens.d_theta) * dtheta) / coef;
  out.dv = out.domega * sens.d_omega + dtheta * sens.d_theta;
  return out;
}

}  // namespace

double wrap_two_pi(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

VariationState initial_variation(const GeodesicPath& path, const DiscreteCurve& c0, const DiscreteCurve& c1,
                                 const Metric& metric, StartCondition start) {
  if (start == StartCondition::kGeneral) return solve_node_variation(path, 0, 1.0, 0.0, c0, c1, metric);
  VariationState out;
  out.dtheta = 1.0;
  out.domega = 0.0;
  out.dv = velocity_sensitivity(c0, c1, 0, path.theta[0], 0.0).d_theta;
  return out;
}

VariationState propagate_variation(const GeodesicPath& path, const VariationState& prev, std::size_t k,
                                   const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric) {
  const double w_prev = path.omega[k - 1];
  const double dtheta = prev.dtheta + prev.domega / (1.0 + 0.25 * w_prev * w_prev);
  const MomentumLinearization in = incoming_linearization(metric, c0[k], w_prev, path.v[k - 1]);
  const double rhs = in.d_omega * prev.domega + dot(in.d_v, prev.dv);
  return solve_node_variation(path, k, dtheta, rhs, c0, c1, metric);
}

std::vector<VariationState> variations(const GeodesicPath& path, const DiscreteCurve& c0, const DiscreteCurve& c1,
                                       const Metric& metric, StartCondition start) {
  const std::size_t n = path.intervals();
  std::vector<VariationState> out;
  out.reserve(n);
  out.push_back(initial_variation(path, c0, c1, metric, start));
  for (std::size_t k = 1; k < n; ++k) out.push_back(propagate_variation(path, out.back(), k, c0, c1, metric));
  return out;
}

double terminal_derivative(const GeodesicPath& path, const DiscreteCurve& c0, const DiscreteCurve& c1,
                           const Metric& metric, StartCondition start) {
  const std::size_t n = path.intervals();
  const VariationState last = variations(path, c0, c1, metric, start).back();
  const MomentumLinearization in = incoming_linearization(metric, c0[n], path.omega[n - 1], path.v[n - 1]);
  return in.d_omega * last.domega + dot(in.d_v, last.dv);
}

NewtonResult newton_solve(const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric,
                          double theta_guess, const NewtonOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorKind::kInvalidArgument, "Newton tolerance must be positive");
  NewtonResult res;
  double theta = theta_guess;
  for (int it = 0;; ++it) {
    res.path = integrate(c0, c1, metric, theta, options.integrate);
    res.residual = terminal_residual(res.path, c0, metric);
    res.residual_history.push_back(res.residual);
    if (std::abs(res.residual) < options.tol) {
      res.theta0 = theta;
      res.iterations = it;
      return res;
    }
    if (it >= options.max_iter) break;
    const double slope = terminal_derivative(res.path, c0, c1, metric, options.integrate.start);
    const double next = theta - res.residual / slope;
    if (!std::isfinite(next)) break;
    theta = next;
  }
  throw NoConvergenceError(
      fmt::format("Newton did not converge from {:.17g}: residual {:.3g} at theta0 {:.17g}", theta_guess,
                  res.residual, theta),
      res.residual, theta);
}

std::vector<ScanPoint> scan_theta0(const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric,
                                   std::size_t grid, const IntegrateOptions& options) {
  if (grid < 2) throw Error(ErrorKind::kInvalidArgument, "theta0 grid needs at least two points");
  std::vector<ScanPoint> out(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    ScanPoint& pt = out[i];
    pt.theta0 = kTwoPi * static_cast<double>(i) / static_cast<double>(grid);
    try {
      const GeodesicPath path = integrate(c0, c1, metric, pt.theta0, options);
      pt.energy = path.energy;
      pt.terminal_residual = terminal_residual(path, c0, metric);
    } catch (const Error& e) {
      pt.ok = false;
      pt.error = e.what();
    }
  }
  return out;
}

namespace {

// Bisection on theta_0 inside a residual sign-change bracket.
bool bisect_bracket(const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric, double a, double ra,
                    double b, const NewtonOptions& opt, Candidate& out) {
  try {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      const GeodesicPath path = integrate(c0, c1, metric, mid, opt.integrate);
      const double r = terminal_residual(path, c0, metric);
      if (std::abs(r) < opt.tol || b - a < 1e-14) {
        out = {wrap_two_pi(mid), path.energy, r, std::abs(r) < opt.tol, false};
        return true;
      }
      if ((r < 0.0) == (ra < 0.0)) {
        a = mid;
        ra = r;
      } else {
        b = mid;
      }
    }
  } catch (const Error&) {
  }
  return false;
}

}  // namespace

DiscrepancyResult discrepancy(const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric,
                              const DiscrepancyOptions& options) {
  DiscrepancyResult res;
  res.scan = scan_theta0(c0, c1, metric, options.grid, options.newton.integrate);
  const auto& scan = res.scan;
  const std::size_t n = scan.size();

  bool all_ok = true;
  double worst = 0.0;
  for (const auto& pt : scan) {
    all_ok = all_ok && pt.ok;
    if (pt.ok) worst = std::max(worst, std::abs(pt.terminal_residual));
  }
  if (all_ok && worst < options.family_tol) {
    res.family = true;
    res.discrepancy = scan.front().energy;
    res.theta0_min = scan.front().theta0;
    for (const auto& pt : scan) {
      res.candidates.push_back({pt.theta0, pt.energy, pt.terminal_residual, true, true});
      if (pt.energy < res.discrepancy) {
        res.discrepancy = pt.energy;
        res.theta0_min = pt.theta0;
      }
    }
    return res;
  }

  std::vector<Candidate> found;
  auto add = [&](const Candidate& c) {
    for (auto& f : found) {
      if (f.converged == c.converged && angular_distance(f.theta0, c.theta0) < options.dedupe_tol) return;
    }
    found.push_back(c);
  };
  auto newton_from = [&](double guess) {
    try {
      const NewtonResult nr = newton_solve(c0, c1, metric, guess, options.newton);
      add({wrap_two_pi(nr.theta0), nr.path.energy, nr.residual, true, false});
      return true;
    } catch (const Error&) {
      return false;
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    const ScanPoint& pt = scan[i];
    if (!pt.ok) continue;
    const ScanPoint& prev = scan[(i + n - 1) % n];
    const ScanPoint& next = scan[(i + 1) % n];

    if (pt.terminal_residual == 0.0) {
      add({pt.theta0, pt.energy, 0.0, true, false});
    } else if ((!prev.ok || pt.energy <= prev.energy) && (!next.ok || pt.energy <= next.energy)) {
      newton_from(pt.theta0);
    }

    if (next.ok && pt.terminal_residual != 0.0 && next.terminal_residual != 0.0 &&
        (pt.terminal_residual < 0.0) != (next.terminal_residual < 0.0)) {
      const double b = i + 1 < n ? next.theta0 : kTwoPi;
      const double guess =
          std::abs(pt.terminal_residual) <= std::abs(next.terminal_residual) ? pt.theta0 : b;
      bool ok = false;
      try {
        const NewtonResult nr = newton_solve(c0, c1, metric, guess, options.newton);
        add({wrap_two_pi(nr.theta0), nr.path.energy, nr.residual, true, false});
        // A Newton run that escaped the bracket still leaves this root unresolved.
        ok = nr.theta0 >= pt.theta0 - 1e-12 && nr.theta0 <= b + 1e-12;
      } catch (const Error&) {
      }
      if (!ok) {
        Candidate c;
        if (bisect_bracket(c0, c1, metric, pt.theta0, pt.terminal_residual, b, options.newton, c)) add(c);
      }
    }
  }

  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.theta0 < b.theta0; });
  res.candidates = found;
  bool any = false;
  for (const auto& c : found) {
    if (!c.converged) continue;
    if (!any || c.energy < res.discrepancy) {
      res.discrepancy = c.energy;
      res.theta0_min = c.theta0;
      any = true;
    }
  }
  if (!any) throw Error(ErrorKind::kNoCandidates, "no Newton start converged");
  return res;
}

}  // namespace relgeo
