#pragma once

#include <string>
#include <vector>

#include "relgeo/discrete.hpp"
#include "relgeo/errors.hpp"

namespace relgeo {

/// Sensitivities of (theta_k, omega_k, v_k) to theta_0 at one node.
struct VariationState {
  double dtheta = 1.0;
  double domega = 0.0;
  Vec2 dv{};
};

/// Variation at k = 0, per unit change of theta_0.
VariationState initial_variation(const GeodesicPath& path, const DiscreteCurve& c0, const DiscreteCurve& c1,
                                 const Metric& metric, StartCondition start = StartCondition::kOrigin);

/// Advances the linearized equations from node k-1 to node k (1 <= k < N).
/// Throws IndexedError(kSingularVariation) on a degenerate linearization.
VariationState propagate_variation(const GeodesicPath& path, const VariationState& prev, std::size_t k,
                                   const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric);

/// All N variation states along an integrated path.
std::vector<VariationState> variations(const GeodesicPath& path, const DiscreteCurve& c0, const DiscreteCurve& c1,
                                       const Metric& metric, StartCondition start = StartCondition::kOrigin);

/// d(terminal_residual)/d(theta_0).
double terminal_derivative(const GeodesicPath& path, const DiscreteCurve& c0, const DiscreteCurve& c1,
                           const Metric& metric, StartCondition start = StartCondition::kOrigin);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  IntegrateOptions integrate{};
};

struct NewtonResult {
  GeodesicPath path;
  double theta0 = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;
};

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, double residual, double theta0)
      : Error(ErrorKind::kNoConvergence, what), residual_(residual), theta0_(theta0) {}

  double residual() const noexcept { return residual_; }
  double theta0() const noexcept { return theta0_; }

 private:
  double residual_;
  double theta0_;
};

/// Newton iteration on theta_0 until |terminal_residual| < tol.
NewtonResult newton_solve(const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric,
                          double theta_guess, const NewtonOptions& options = {});

struct ScanPoint {
  double theta0 = 0.0;
  double energy = 0.0;
  double terminal_residual = 0.0;
  bool ok = true;
  std::string error;
};

/// Integrates at theta_0 = 2 pi i / grid, i = 0..grid-1. Failures are recorded per point.
std::vector<ScanPoint> scan_theta0(const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric,
                                   std::size_t grid, const IntegrateOptions& options = {});

struct Candidate {
  double theta0 = 0.0;
  double energy = 0.0;
  double terminal_residual = 0.0;
  bool converged = false;
  bool family = false;
};

struct DiscrepancyResult {
  double discrepancy = 0.0;
  double theta0_min = 0.0;
  bool family = false;
  std::vector<Candidate> candidates;  // sorted by theta0
  std::vector<ScanPoint> scan;
};

struct DiscrepancyOptions {
  std::size_t grid = 128;
  NewtonOptions newton{};
  double family_tol = 1e-12;
  double dedupe_tol = 1e-6;
};

/// Global minimum of the energy over theta_0: scan, then Newton from every
/// scanned energy minimum and every residual sign change.
/// Throws kNoCandidates when no start converges.
DiscrepancyResult discrepancy(const DiscreteCurve& c0, const DiscreteCurve& c1, const Metric& metric,
                              const DiscrepancyOptions& options = {});

/// Angle reduced to [0, 2 pi).
double wrap_two_pi(double theta);

}  // namespace relgeo
