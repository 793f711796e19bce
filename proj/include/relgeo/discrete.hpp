#pragma once

// Cayley-map discrete equations of motion for relative geodesics.
//
// All per-step rates are stored in scaled form: omega_k and v_k below are
// h * (angular rate) and h * (linear rate), so Cay(omega_k, v_k) = g_k^{-1} g_{k+1}
// holds without any factor of h. Energies divide by h once at the end.

#include <vector>

#include "relgeo/curve.hpp"
#include "relgeo/se2.hpp"

namespace relgeo {

/// Admissible discrete curve g_k = (theta_k, x_k), k = 0..N, with its
/// scaled update elements xi_k = (omega_k, v_k), k = 0..N-1.
struct GeodesicPath {
  std::vector<double> theta;
  std::vector<Vec2> x;
  std::vector<double> omega;
  std::vector<Vec2> v;
  double energy = 0.0;

  std::size_t intervals() const noexcept { return omega.size(); }
};

/// How g_0 is pinned. kOrigin is the closed form valid when both curves
/// start at the origin; kGeneral solves the left natural boundary condition
/// for omega_0 and accepts any starting points.
enum class StartCondition { kOrigin, kGeneral };

struct IntegrateOptions {
  StartCondition start = StartCondition::kOrigin;
  double root_tolerance = 1e-13;
  int max_newton_iterations = 100;
  double max_abs_omega = 1e3;
};

/// Cursor of the forward sweep: g_k is known, xi_{k-1} is known.
struct StepState {
  std::size_t k = 0;
  double theta = 0.0;
  double omega_prev = 0.0;
  Vec2 v_prev{};
};

struct StepUpdate {
  double omega = 0.0;
  Vec2 v{};
};

struct StepResult {
  StepUpdate update;
  StepState next;
};

/// b_k = R_{-theta_k}(c1_{k+1} - c1_k) - R^_{omega_k} c0_{k+1} + c0_k.
Vec2 b_vector(const DiscreteCurve& c0, const DiscreteCurve& c1, std::size_t k, double theta_k,
              double omega_k);

/// Solves A(omega) v = b, i.e. v = B(omega) b.
Vec2 velocity_from_omega(const Vec2& b, double omega);

/// P_c(M(xi)^T xi^flat): momentum leaving node c through the update xi.
double outgoing_momentum(const Metric& metric, const Vec2& c, double omega, const Vec2& v);

/// P_c(M(-xi)^T xi^flat): momentum arriving at node c through the update xi.
double incoming_momentum(const Metric& metric, const Vec2& c, double omega, const Vec2& v);

/// Partial derivatives of a projected momentum with respect to (omega, v).
struct MomentumLinearization {
  double d_omega = 0.0;
  Vec2 d_v{};
};

MomentumLinearization outgoing_linearization(const Metric& metric, const Vec2& c, double omega, const Vec2& v);
MomentumLinearization incoming_linearization(const Metric& metric, const Vec2& c, double omega, const Vec2& v);

/// dv_k/domega_k and dv_k/dtheta_k for v_k = B(omega_k) b_k(theta_k, omega_k).
struct VelocitySensitivity {
  Vec2 d_omega{};
  Vec2 d_theta{};
};

VelocitySensitivity velocity_sensitivity(const DiscreteCurve& c0, const DiscreteCurve& c1, std::size_t k,
                                         double theta_k, double omega_k);

/// Projected equation of motion at interior node k, left side minus right.
double eom_residual(const Metric& metric, const DiscreteCurve& c0, std::size_t k, double omega_k,
                    const Vec2& v_k, double omega_prev, const Vec2& v_prev);

/// Solves the node-k equation of motion for xi_k and advances to g_{k+1}.
/// The root nearest omega_prev is taken. Throws IndexedError(kRootFindFailed).
StepResult step(const StepState& state, const DiscreteCurve& c0, const DiscreteCurve& c1,
                const Metric& metric, const IntegrateOptions& options = {});

/// Left boundary: fixes xi_0 from theta_0 and returns the cursor at k = 1.
struct LeftBoundary {
  StepUpdate first;
  StepState next;
};

LeftBoundary init_leftmost(const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric,
                           double theta0, const IntegrateOptions& options = {});

/// Right natural boundary residual P_{c0_N}(M(-xi_{N-1})^T xi_{N-1}^flat).
/// Zero exactly when the path is stationary with respect to theta_N.
double terminal_residual(const GeodesicPath& path, const DiscreteCurve& c0, const Metric& metric);

GeodesicPath integrate(const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric,
                       double theta0, const IntegrateOptions& options = {});

/// (1/2h) sum_k (m omega_k^2 + |v_k|^2) over the stored scaled updates.
double path_energy(const std::vector<double>& omega, const std::vector<Vec2>& v, const Metric& metric);

struct PathDiagnostics {
  double admissibility_error = 0.0;  // max_k |R_{theta_k} c0_k + x_k - c1_k|
  double cayley_error = 0.0;         // max_k |theta_{k+1} - theta_k - 2 atan(omega_k / 2)|
  double update_error = 0.0;         // max_k |Cay(xi_k) - g_k^{-1} g_{k+1}| (translation part)
};

PathDiagnostics diagnose(const GeodesicPath& path, const DiscreteCurve& c0, const DiscreteCurve& c1);

void require_same_length(const DiscreteCurve& c0, const DiscreteCurve& c1);

}  // namespace relgeo
