#pragma once

// SE(2) / se(2) arithmetic with closed-form 2x2 and 3x3 linear algebra.
//
// Conventions
// -----------
// Group element g = (theta, x) with matrix form
//   [ R_theta  x ]
//   [    0     1 ]
// Algebra element xi = (omega, v) with matrix form
//   [ -omega J  v ]       J = [  0  1 ]
//   [     0     0 ]           [ -1  0 ]
// so that -omega J is the usual counterclockwise generator.
// Coalgebra element mu = (pi, p), paired with xi as pi*omega + p.v.

#include <array>
#include <cmath>

namespace relgeo {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
constexpr double squared_norm(const Vec2& a) { return dot(a, a); }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 1.0, b = 0.0;
  double c = 0.0, d = 1.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  constexpr Mat2 transpose() const { return {a, c, b, d}; }
  constexpr double det() const { return a * d - b * c; }

  friend constexpr Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
  }
  friend constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c,
            m.c * n.b + m.d * n.d};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& m) {
    return {s * m.a, s * m.b, s * m.c, s * m.d};
  }
  friend constexpr Mat2 operator+(const Mat2& m, const Mat2& n) {
    return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d};
  }
  friend constexpr Mat2 operator-(const Mat2& m, const Mat2& n) {
    return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
  }
};

using Mat3 = std::array<std::array<double, 3>, 3>;

inline constexpr Mat2 kJ{0.0, 1.0, -1.0, 0.0};

/// J v without forming the matrix.
constexpr Vec2 apply_j(const Vec2& v) { return {v.y, -v.x}; }

/// Counterclockwise rotation R_theta.
inline Mat2 rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c, -s, s, c};
}

/// Reduces an angle to (-pi, pi].
double principal_angle(double theta);

/// Weight on the rotational rate in |xi|^2 = m omega^2 + v.v. Always positive.
class Metric {
 public:
  explicit Metric(double m = 2.0);

  double m() const noexcept { return m_; }

 private:
  double m_;
};

/// (R_theta, x). The angle is kept unreduced so continuous families of
/// rotations do not jump across branch cuts.
struct GroupElement {
  double theta = 0.0;
  Vec2 x{};

  static constexpr GroupElement identity() { return {}; }

  Mat3 matrix() const;
};

struct AlgebraElement {
  double omega = 0.0;
  Vec2 v{};

  friend constexpr AlgebraElement operator-(const AlgebraElement& xi) { return {-xi.omega, -xi.v}; }
  friend constexpr AlgebraElement operator*(double s, const AlgebraElement& xi) {
    return {s * xi.omega, s * xi.v};
  }
};

struct CoAlgebraElement {
  double pi = 0.0;
  Vec2 p{};
};

GroupElement compose(const GroupElement& g, const GroupElement& k);
GroupElement inverse(const GroupElement& g);
Vec2 act(const GroupElement& g, const Vec2& c);

double pairing(const CoAlgebraElement& mu, const AlgebraElement& xi);
double norm_sq(const Metric& metric, const AlgebraElement& xi);

/// Legendre map xi -> xi^flat = (m omega, v).
CoAlgebraElement flat(const Metric& metric, const AlgebraElement& xi);

// Cayley map and its derivatives.

/// The SO(2) Cayley transform R^_omega.
Mat2 cayley_rotation(double omega);

/// Elementwise d R^_omega / d omega.
Mat2 cayley_so2_derivative(double omega);

GroupElement cayley(const AlgebraElement& xi);

/// Inverse Cayley map. Throws kAngleOutOfRange when the principal angle of
/// g is pi, which has no finite preimage.
AlgebraElement cayley_inv(const GroupElement& g);

/// Matrix M(xi) of dCay^{-1}_xi in the (omega, v1, v2) basis.
Mat3 dcay_inv_matrix(const AlgebraElement& xi);

/// (dCay^{-1}_xi)^* mu = M(xi)^T mu.
CoAlgebraElement dcay_inv_star(const AlgebraElement& xi, const CoAlgebraElement& mu);

/// Ad_g xi = g xi g^{-1}.
AlgebraElement ad_group(const GroupElement& g, const AlgebraElement& xi);

/// P_c(pi, p) = pi + p.J c. Vanishes exactly on the annihilator of the
/// isotropy subalgebra at c.
double project(const Vec2& c, const CoAlgebraElement& mu);

Mat2 a_matrix(double omega);
Mat2 b_matrix(double omega);

// Exponential coordinates, used for interpolation only.
GroupElement exp_se2(const AlgebraElement& xi);

/// Throws kLogUndefined when the principal angle of g is pi.
AlgebraElement log_se2(const GroupElement& g);

}  // namespace relgeo
