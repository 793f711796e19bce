#include "relgeo/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "relgeo/errors.hpp"

namespace relgeo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec2 zero_fn(double) { return {}; }

double simpson_nodes(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;
  double sum = f.front() + f.back();
  for (std::size_t i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  return sum * h / 3.0;
}

// Returns (theta', and for the theta form theta'') at s.
struct OdeRhs {
  const ContinuousCurve& c0;
  const ContinuousCurve& c1;
  double m;

  double inertia(double s) const { return m + squared_norm(c0.c(s)); }

  // theta' that makes p vanish, or equals p in general: (p + c0^T J R_{-theta} c1' - c0^T J c0') / I.
  double thetadot_from_p(double s, double theta, double p) const {
    const Vec2 a = c0.c(s);
    const Vec2 ja = apply_j(a);  // J a, and a^T J w = -(J a).w
    const double coupling = -dot(ja, rotation(-theta) * c1.d1(s));
    const double self = -dot(ja, c0.d1(s));
    return (p + coupling - self) / inertia(s);
  }

  double thetaddot(double s, double theta, double thetadot) const {
    const Vec2 a = c0.c(s);
    const Vec2 w = c0.d2(s) - rotation(-theta) * c1.d2(s);
    return -(2.0 * dot(a, c0.d1(s)) * thetadot - dot(apply_j(a), w)) / inertia(s);
  }

  // dp/ds = c0^T R_{-theta} c1' theta' - (c0')^T R_{-theta} J c1'.
  double pdot(double s, double theta, double thetadot) const {
    const Mat2 r = rotation(-theta);
    return dot(c0.c(s), r * c1.d1(s)) * thetadot - dot(c0.d1(s), r * apply_j(c1.d1(s)));
  }
};

}  // namespace

ContinuousCurve ContinuousCurve::from_spec(const CurveSpec& spec) {
  switch (spec.kind) {
    case CurveKind::kPoint: {
      const Vec2 at = spec.offset;
      return {[at](double) { return at; }, zero_fn, zero_fn};
    }
    case CurveKind::kSegment: return affine({}, spec.direction);
    case CurveKind::kCircle: {
      const double r = spec.radius;
      const double w = kTwoPi;
      return {[=](double s) { return Vec2{r * std::cos(w * s), r * std::sin(w * s)}; },
              [=](double s) { return Vec2{-r * w * std::sin(w * s), r * w * std::cos(w * s)}; },
              [=](double s) { return Vec2{-r * w * w * std::cos(w * s), -r * w * w * std::sin(w * s)}; }};
    }
    case CurveKind::kSemicircle:
      return {[](double s) { return Vec2{std::cos(kPi * s), std::sin(kPi * s)}; },
              [](double s) { return Vec2{-kPi * std::sin(kPi * s), kPi * std::cos(kPi * s)}; },
              [](double s) { return Vec2{-kPi * kPi * std::cos(kPi * s), -kPi * kPi * std::sin(kPi * s)}; }};
    case CurveKind::kFigureEight: {
      const double a = 4.0 * kPi;
      const double b = 2.0 * kPi;
      return {[=](double s) { return Vec2{std::sin(a * s), std::sin(b * s)}; },
              [=](double s) { return Vec2{a * std::cos(a * s), b * std::cos(b * s)}; },
              [=](double s) { return Vec2{-a * a * std::sin(a * s), -b * b * std::sin(b * s)}; }};
    }
    case CurveKind::kPolynomial: break;
  }
  throw Error(ErrorKind::kUnsupportedSpec, "arclength polynomials have no closed-form continuous model");
}

ContinuousCurve ContinuousCurve::affine(Vec2 origin, Vec2 direction) {
  return {[=](double s) { return origin + s * direction; }, [=](double) { return direction; }, zero_fn};
}

ContinuousCurve transformed(const GroupElement& g, const ContinuousCurve& curve) {
  const Mat2 r = rotation(g.theta);
  const Vec2 x = g.x;
  return {[=](double s) { return r * curve.c(s) + x; }, [=](double s) { return r * curve.d1(s); },
          [=](double s) { return r * curve.d2(s); }};
}

double derivative_mismatch(const ContinuousCurve& curve, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  constexpr double kStep = 1e-5;
  double worst = 0.0;
  auto rel = [](const Vec2& fd, const Vec2& exact) { return norm(fd - exact) / std::max(1.0, norm(exact)); };
  for (int i = 0; i < 10; ++i) {
    const double s = unit(rng);
    const Vec2 fd1 = (1.0 / (2.0 * kStep)) * (curve.c(s + kStep) - curve.c(s - kStep));
    const Vec2 fd2 = (1.0 / (2.0 * kStep)) * (curve.d1(s + kStep) - curve.d1(s - kStep));
    worst = std::max({worst, rel(fd1, curve.d1(s)), rel(fd2, curve.d2(s))});
  }
  return worst;
}

void validate_derivatives(const ContinuousCurve& curve, std::uint64_t seed) {
  if (derivative_mismatch(curve, seed) > 1e-5) {
    throw Error(ErrorKind::kInvalidArgument, "curve derivatives disagree with finite differences");
  }
}

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 2) panels = 2;
  if (panels % 2 == 1) ++panels;
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

double discrepancy_c0_zero(const ContinuousCurve& c1) {
  return 0.5 * simpson([&](double s) { return squared_norm(c1.d1(s)); }, 0.0, 1.0);
}

double discrepancy_c1_zero(const ContinuousCurve& c0, const Metric& metric) {
  const double m = metric.m();
  return 0.5 * simpson(
                   [&](double s) {
                     const Vec2 a = c0.c(s);
                     const Vec2 da = c0.d1(s);
                     const double t = dot(da, apply_j(a));
                     return squared_norm(da) - t * t / (m + squared_norm(a));
                   },
                   0.0, 1.0);
}

double perturbed_momentum(const ContinuousCurve& c0, const Metric& metric, double, double thetadot, double s) {
  const Vec2 a = c0.c(s);
  return (metric.m() + squared_norm(a)) * thetadot - dot(c0.d1(s), apply_j(a));
}

double scalar_momentum(const ContinuousCurve& c0, const ContinuousCurve& c1, const Metric& metric, double theta,
                       double thetadot, double s) {
  const Vec2 a = c0.c(s);
  return perturbed_momentum(c0, metric, theta, thetadot, s) + dot(c1.d1(s), rotation(theta) * apply_j(a));
}

double reduced_lagrangian(const ContinuousCurve& c0, const ContinuousCurve& c1, const Metric& metric,
                          double theta, double thetadot, double s) {
  const Vec2 v = rotation(-theta) * c1.d1(s) - c0.d1(s) + thetadot * apply_j(c0.c(s));
  return 0.5 * (metric.m() * thetadot * thetadot + squared_norm(v));
}

double solution_energy(const ContinuousCurve& c0, const ContinuousCurve& c1, const Metric& metric,
                       const ContinuousSolution& sol) {
  std::vector<double> l(sol.s.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    l[i] = reduced_lagrangian(c0, c1, metric, sol.theta[i], sol.thetadot[i], sol.s[i]);
  }
  if (l.size() % 2 == 1) return simpson_nodes(l, sol.s[1] - sol.s[0]);
  // Odd interval count: Simpson on all but the last interval, trapezoid on it.
  const double h = sol.s[1] - sol.s[0];
  std::vector<double> head(l.begin(), l.end() - 1);
  return simpson_nodes(head, h) + 0.5 * h * (l[l.size() - 2] + l.back());
}

std::vector<ContinuousSolution> segment_geodesics(const ContinuousCurve& c0, const ContinuousCurve& c1,
                                                  const Metric& metric, int samples) {
  const Vec2 start = c0.c(0.0);
  const Vec2 end = c0.c(1.0);
  const Vec2 big_c = c1.d1(0.0);
  if (norm(start) > 1e-12) throw Error(ErrorKind::kPreconditionViolated, "c0 must start at the origin");
  if (norm(end) == 0.0) throw Error(ErrorKind::kPreconditionViolated, "c0 must not end at the origin");
  if (norm(big_c) == 0.0) throw Error(ErrorKind::kPreconditionViolated, "c1 must have nonzero velocity");
  for (double s : {0.25, 0.5, 1.0}) {
    if (norm(c1.d1(s) - big_c) > 1e-12 * norm(big_c)) {
      throw Error(ErrorKind::kPreconditionViolated, "c1 must be affine");
    }
  }
  if (samples < 2) samples = 2;

  const double m = metric.m();
  auto phi = [&](double s) {
    const Vec2 a = c0.c(s);
    return dot(c0.d1(s), apply_j(a)) / (m + squared_norm(a));
  };
  const double chi = std::atan2(big_c.y, big_c.x) - std::atan2(end.y, end.x);
  const double h = 1.0 / samples;

  std::vector<ContinuousSolution> out;
  for (double theta1 : {chi, chi + kPi}) {
    ContinuousSolution sol;
    sol.s.resize(samples + 1);
    sol.theta.resize(samples + 1);
    sol.thetadot.resize(samples + 1);
    sol.theta[samples] = theta1;
    for (int i = 0; i <= samples; ++i) {
      sol.s[i] = i * h;
      sol.thetadot[i] = phi(sol.s[i]);
    }
    for (int i = samples - 1; i >= 0; --i) {
      const double mid = phi((i + 0.5) * h);
      sol.theta[i] = sol.theta[i + 1] - h / 6.0 * (sol.thetadot[i] + 4.0 * mid + sol.thetadot[i + 1]);
    }
    sol.theta0 = sol.theta[0];
    sol.energy = solution_energy(c0, c1, metric, sol);
    out.push_back(std::move(sol));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.energy < b.energy; });
  return out;
}

ContinuousSolution shoot_continuous(const ContinuousCurve& c0, const ContinuousCurve& c1, const Metric& metric,
                                    double theta0, int steps, OdeForm form) {
  if (steps < 2) steps = 2;
  const OdeRhs rhs{c0, c1, metric.m()};
  const double h = 1.0 / steps;

  ContinuousSolution sol;
  sol.theta0 = theta0;
  sol.s.resize(steps + 1);
  sol.theta.resize(steps + 1);
  sol.thetadot.resize(steps + 1);

  double theta = theta0;
  if (form == OdeForm::kTheta) {
    double w = rhs.thetadot_from_p(0.0, theta, 0.0);
    sol.theta[0] = theta;
    sol.thetadot[0] = w;
    for (int i = 0; i < steps; ++i) {
      const double s = i * h;
      const double k1t = w;
      const double k1w = rhs.thetaddot(s, theta, w);
      const double k2t = w + 0.5 * h * k1w;
      const double k2w = rhs.thetaddot(s + 0.5 * h, theta + 0.5 * h * k1t, k2t);
      const double k3t = w + 0.5 * h * k2w;
      const double k3w = rhs.thetaddot(s + 0.5 * h, theta + 0.5 * h * k2t, k3t);
      const double k4t = w + h * k3w;
      const double k4w = rhs.thetaddot(s + h, theta + h * k3t, k4t);
      theta += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
      w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
      sol.theta[i + 1] = theta;
      sol.thetadot[i + 1] = w;
    }
  } else {
    double p = 0.0;
    auto f = [&](double s, double t, double pp, double& dt, double& dp) {
      dt = rhs.thetadot_from_p(s, t, pp);
      dp = rhs.pdot(s, t, dt);
    };
    sol.theta[0] = theta;
    sol.thetadot[0] = rhs.thetadot_from_p(0.0, theta, p);
    for (int i = 0; i < steps; ++i) {
      const double s = i * h;
      double k1t, k1p, k2t, k2p, k3t, k3p, k4t, k4p;
      f(s, theta, p, k1t, k1p);
      f(s + 0.5 * h, theta + 0.5 * h * k1t, p + 0.5 * h * k1p, k2t, k2p);
      f(s + 0.5 * h, theta + 0.5 * h * k2t, p + 0.5 * h * k2p, k3t, k3p);
      f(s + h, theta + h * k3t, p + h * k3p, k4t, k4p);
      theta += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
      p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      sol.theta[i + 1] = theta;
      sol.thetadot[i + 1] = rhs.thetadot_from_p(s + h, theta, p);
    }
  }
  for (int i = 0; i <= steps; ++i) sol.s[i] = i * h;
  sol.energy = solution_energy(c0, c1, metric, sol);
  return sol;
}

double BvpResult::min_energy() const {
  if (solutions.empty()) throw Error(ErrorKind::kNoRootFound, "continuous solver found no root");
  double best = solutions.front().energy;
  for (const auto& s : solutions) best = std::min(best, s.energy);
  return best;
}

BvpResult solve_continuous_bvp(const ContinuousCurve& c0, const ContinuousCurve& c1, const Metric& metric,
                               const BvpOptions& options) {
  if (options.grid < 2) throw Error(ErrorKind::kInvalidArgument, "theta0 grid needs at least two points");
  auto residual = [&](double t0, ContinuousSolution* keep) {
    ContinuousSolution sol = shoot_continuous(c0, c1, metric, t0, options.steps);
    const double r = scalar_momentum(c0, c1, metric, sol.theta.back(), sol.thetadot.back(), 1.0);
    if (keep != nullptr) *keep = std::move(sol);
    return r;
  };

  BvpResult result;
  const int n = options.grid;
  result.grid_theta0.resize(n);
  result.grid_residual.resize(n);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    result.grid_theta0[i] = kTwoPi * i / n;
    result.grid_residual[i] = residual(result.grid_theta0[i], nullptr);
    worst = std::max(worst, std::abs(result.grid_residual[i]));
  }

  if (worst < options.family_tol) {
    result.status = BvpStatus::kFamily;
    for (int i = 0; i < n; ++i) {
      ContinuousSolution sol;
      residual(result.grid_theta0[i], &sol);
      result.solutions.push_back(std::move(sol));
    }
    std::stable_sort(result.solutions.begin(), result.solutions.end(),
                     [](const auto& a, const auto& b) { return a.energy < b.energy; });
    return result;
  }

  std::vector<double> roots;
  for (int i = 0; i < n; ++i) {
    double a = result.grid_theta0[i];
    double ra = result.grid_residual[i];
    const double b0 = i + 1 < n ? result.grid_theta0[i + 1] : kTwoPi;
    const double rb0 = result.grid_residual[(i + 1) % n];
    if (ra == 0.0) {
      roots.push_back(a);
      continue;
    }
    if (rb0 == 0.0 || (ra < 0.0) == (rb0 < 0.0)) continue;
    double b = b0;
    double root = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
      root = 0.5 * (a + b);
      const double rm = residual(root, nullptr);
      if (std::abs(rm) < options.tol || b - a < 1e-15) break;
      if ((rm < 0.0) == (ra < 0.0)) {
        a = root;
        ra = rm;
      } else {
        b = root;
      }
    }
    roots.push_back(std::fmod(root, kTwoPi));
  }

  for (double t0 : roots) {
    ContinuousSolution sol;
    residual(t0, &sol);
    result.solutions.push_back(std::move(sol));
  }
  std::sort(result.solutions.begin(), result.solutions.end(),
            [](const auto& a, const auto& b) { return a.energy < b.energy; });
  result.status = result.solutions.empty() ? BvpStatus::kNoRootFound : BvpStatus::kRoots;
  return result;
}

DiscreteCurve discretize(const ContinuousCurve& curve, std::size_t n) {
  if (n < 1) throw Error(ErrorKind::kTooFewPoints, "sampling needs N >= 1");
  std::vector<Vec2> pts(n + 1);
  for (std::size_t k = 0; k <= n; ++k) pts[k] = curve.c(static_cast<double>(k) / static_cast<double>(n));
  return DiscreteCurve(std::move(pts));
}

}  // namespace relgeo
