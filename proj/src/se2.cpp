#include "relgeo/se2.hpp"

#include <numbers>

#include "relgeo/errors.hpp"

namespace relgeo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kAngleOutOfRange: return "AngleOutOfRange";
    case ErrorKind::kLogUndefined: return "LogUndefined";
    case ErrorKind::kUnsupportedSpec: return "UnsupportedSpec";
    case ErrorKind::kDegenerateTangent: return "DegenerateTangent";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kTooFewPoints: return "TooFewPoints";
    case ErrorKind::kNotNormalized: return "NotNormalized";
    case ErrorKind::kRootFindFailed: return "RootFindFailed";
    case ErrorKind::kSingularVariation: return "SingularVariation";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kNoCandidates: return "NoCandidates";
    case ErrorKind::kAngleGap: return "AngleGap";
    case ErrorKind::kPreconditionViolated: return "PreconditionViolated";
    case ErrorKind::kNoRootFound: return "NoRootFound";
    case ErrorKind::kMaxIterations: return "MaxIterations";
  }
  return "Unknown";
}

double principal_angle(double theta) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::remainder(theta, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

Metric::Metric(double m) : m_(m) {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw Error(ErrorKind::kInvalidArgument, "metric weight m must be positive and finite");
  }
}

Mat3 GroupElement::matrix() const {
  const Mat2 r = rotation(theta);
  return {{{r.a, r.b, x.x}, {r.c, r.d, x.y}, {0.0, 0.0, 1.0}}};
}

GroupElement compose(const GroupElement& g, const GroupElement& k) {
  return {g.theta + k.theta, rotation(g.theta) * k.x + g.x};
}

GroupElement inverse(const GroupElement& g) {
  const Mat2 r_inv = rotation(-g.theta);
  return {-g.theta, -(r_inv * g.x)};
}

Vec2 act(const GroupElement& g, const Vec2& c) { return rotation(g.theta) * c + g.x; }

double pairing(const CoAlgebraElement& mu, const AlgebraElement& xi) {
  return mu.pi * xi.omega + dot(mu.p, xi.v);
}

double norm_sq(const Metric& metric, const AlgebraElement& xi) {
  return metric.m() * xi.omega * xi.omega + squared_norm(xi.v);
}

CoAlgebraElement flat(const Metric& metric, const AlgebraElement& xi) {
  return {metric.m() * xi.omega, xi.v};
}

Mat2 cayley_rotation(double omega) {
  const double q = 0.25 * omega * omega;
  const double inv = 1.0 / (1.0 + q);
  const double c = (1.0 - q) * inv;
  const double s = omega * inv;
  return {c, -s, s, c};
}

Mat2 cayley_so2_derivative(double omega) {
  const double q = 0.25 * omega * omega;
  const double inv2 = 1.0 / ((1.0 + q) * (1.0 + q));
  const double dc = -omega * inv2;
  const double ds = (1.0 - q) * inv2;
  return {dc, -ds, ds, dc};
}

Mat2 a_matrix(double omega) {
  const double inv = 1.0 / (1.0 + 0.25 * omega * omega);
  return {inv, -0.5 * omega * inv, 0.5 * omega * inv, inv};
}

Mat2 b_matrix(double omega) { return {1.0, 0.5 * omega, -0.5 * omega, 1.0}; }

GroupElement cayley(const AlgebraElement& xi) {
  return {2.0 * std::atan(0.5 * xi.omega), a_matrix(xi.omega) * xi.v};
}

AlgebraElement cayley_inv(const GroupElement& g) {
  const double theta = principal_angle(g.theta);
  if (std::abs(theta) >= std::numbers::pi) {
    throw Error(ErrorKind::kAngleOutOfRange, "rotation of pi is outside the Cayley chart");
  }
  const double omega = 2.0 * std::tan(0.5 * theta);
  return {omega, b_matrix(omega) * g.x};
}

Mat3 dcay_inv_matrix(const AlgebraElement& xi) {
  const double w = xi.omega;
  const double v1 = xi.v.x;
  const double v2 = xi.v.y;
  return {{{1.0 + 0.25 * w * w, 0.0, 0.0},
           {-0.5 * v2 + 0.25 * w * v1, 1.0, 0.5 * w},
           {0.5 * v1 + 0.25 * w * v2, -0.5 * w, 1.0}}};
}

CoAlgebraElement dcay_inv_star(const AlgebraElement& xi, const CoAlgebraElement& mu) {
  const Mat3 m = dcay_inv_matrix(xi);
  const std::array<double, 3> in{mu.pi, mu.p.x, mu.p.y};
  std::array<double, 3> out{};
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) out[j] += m[i][j] * in[i];
  }
  return {out[0], {out[1], out[2]}};
}

AlgebraElement ad_group(const GroupElement& g, const AlgebraElement& xi) {
  return {xi.omega, rotation(g.theta) * xi.v + xi.omega * apply_j(g.x)};
}

double project(const Vec2& c, const CoAlgebraElement& mu) { return mu.pi + dot(mu.p, apply_j(c)); }

namespace {

// V(omega) = a I + b G with G the counterclockwise generator.
struct ExpCoefficients {
  double a;
  double b;
};

ExpCoefficients exp_coefficients(double omega) {
  if (std::abs(omega) < 1e-4) {
    const double w2 = omega * omega;
    return {1.0 - w2 / 6.0 + w2 * w2 / 120.0, omega * (0.5 - w2 / 24.0 + w2 * w2 / 720.0)};
  }
  return {std::sin(omega) / omega, (1.0 - std::cos(omega)) / omega};
}

}  // namespace

GroupElement exp_se2(const AlgebraElement& xi) {
  const auto [a, b] = exp_coefficients(xi.omega);
  const Mat2 v{a, -b, b, a};
  return {xi.omega, v * xi.v};
}

AlgebraElement log_se2(const GroupElement& g) {
  const double theta = principal_angle(g.theta);
  if (std::abs(theta) >= std::numbers::pi) {
    throw Error(ErrorKind::kLogUndefined, "log is undefined at a rotation of pi");
  }
  const auto [a, b] = exp_coefficients(theta);
  const double inv = 1.0 / (a * a + b * b);
  const Mat2 v_inv{a * inv, b * inv, -b * inv, a * inv};
  return {theta, v_inv * g.x};
}

}  // namespace relgeo
