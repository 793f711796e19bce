#pragma once

// Closed-form special cases and a continuous shooting solver for the
// relative-geodesic boundary value problem
//   (m + |c0|^2) theta'' + 2 c0.c0' theta' + c0^T J (c0'' - R_{-theta} c1'') = 0,
//   p(0) = p(1) = 0.

#include <cstdint>
#include <functional>
#include <vector>

#include "relgeo/curve.hpp"
#include "relgeo/se2.hpp"

namespace relgeo {

/// Smooth curve on [0, 1] with its first two derivatives.
struct ContinuousCurve {
  std::function<Vec2(double)> c;
  std::function<Vec2(double)> d1;
  std::function<Vec2(double)> d2;

  static ContinuousCurve from_spec(const CurveSpec& spec);
  /// s -> origin + s * direction.
  static ContinuousCurve affine(Vec2 origin, Vec2 direction);
};

/// g . curve for a fixed rigid motion g.
ContinuousCurve transformed(const GroupElement& g, const ContinuousCurve& curve);

/// Largest relative mismatch between the stored derivatives and central
/// differences of c (resp. c') at 10 pseudo-random s.
double derivative_mismatch(const ContinuousCurve& curve, std::uint64_t seed = 1);

/// Throws kInvalidArgument when derivative_mismatch exceeds 1e-5.
void validate_derivatives(const ContinuousCurve& curve, std::uint64_t seed = 1);

/// Composite Simpson rule; `panels` is rounded up to an even count.
double simpson(const std::function<double(double)>& f, double a, double b, int panels = 10000);

/// 1/2 int |c1'|^2: every theta(0) is a geodesic when c0 is the origin.
double discrepancy_c0_zero(const ContinuousCurve& c1);

/// 1/2 int (|c0'|^2 - ((c0')^T J c0)^2 / (m + |c0|^2)) for c1 at the origin.
double discrepancy_c1_zero(const ContinuousCurve& c0, const Metric& metric);

/// p^ = (m + |c0|^2) theta' - (c0')^T J c0.
double perturbed_momentum(const ContinuousCurve& c0, const Metric& metric, double theta, double thetadot,
                          double s);

/// p = (m + |c0|^2) theta' + (c1')^T R_theta J c0 - (c0')^T J c0.
double scalar_momentum(const ContinuousCurve& c0, const ContinuousCurve& c1, const Metric& metric, double theta,
                       double thetadot, double s);

/// Reduced Lagrangian 1/2 (m theta'^2 + |R_{-theta} c1' - c0' + theta' J c0|^2).
double reduced_lagrangian(const ContinuousCurve& c0, const ContinuousCurve& c1, const Metric& metric,
                          double theta, double thetadot, double s);

struct ContinuousSolution {
  std::vector<double> s;
  std::vector<double> theta;
  std::vector<double> thetadot;
  double energy = 0.0;
  double theta0 = 0.0;
};

/// Both relative geodesics between c0 (with c0(0) = 0) and the affine curve
/// with constant velocity C, sorted by energy.
/// Throws kPreconditionViolated when c0(0) != 0, c0(1) = 0 or C = 0.
std::vector<ContinuousSolution> segment_geodesics(const ContinuousCurve& c0, const ContinuousCurve& c1,
                                                  const Metric& metric, int samples = 10000);

enum class OdeForm {
  kTheta,          // second-order equation in theta alone
  kEulerLagrange,  // first-order system in (theta, p)
};

/// Integrates from theta(0) with p(0) = 0 over RK4 `steps` steps.
/// The returned solution has s, theta, thetadot on the step grid.
ContinuousSolution shoot_continuous(const ContinuousCurve& c0, const ContinuousCurve& c1, const Metric& metric,
                                    double theta0, int steps = 2000, OdeForm form = OdeForm::kTheta);

struct BvpOptions {
  int grid = 64;
  int steps = 2000;
  double tol = 1e-10;
  double family_tol = 1e-12;
};

enum class BvpStatus { kRoots, kFamily, kNoRootFound };

struct BvpResult {
  BvpStatus status = BvpStatus::kNoRootFound;
  /// Refined roots sorted by energy. A family carries one representative per grid point.
  std::vector<ContinuousSolution> solutions;
  /// Terminal momentum p(1) at each grid angle.
  std::vector<double> grid_theta0;
  std::vector<double> grid_residual;

  double min_energy() const;
};

BvpResult solve_continuous_bvp(const ContinuousCurve& c0, const ContinuousCurve& c1, const Metric& metric,
                               const BvpOptions& options = {});

/// Simpson quadrature of the reduced Lagrangian over a solution's own grid.
double solution_energy(const ContinuousCurve& c0, const ContinuousCurve& c1, const Metric& metric,
                       const ContinuousSolution& sol);

/// Samples c at s_k = k/N.
DiscreteCurve discretize(const ContinuousCurve& curve, std::size_t n);

}  // namespace relgeo
