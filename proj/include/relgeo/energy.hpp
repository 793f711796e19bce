#pragma once

// Discrete energy as a function of the angles theta_0..theta_N alone, with
// translations eliminated through admissibility.

#include <vector>

#include "relgeo/curve.hpp"
#include "relgeo/se2.hpp"

namespace relgeo {

enum class Backend { kAuto, kScalar, kAvx2 };

/// True when the AVX2 sweep is compiled in and the CPU supports AVX2 + FMA.
bool avx2_available();

/// Backend chosen for kAuto.
Backend resolve_backend(Backend requested);

/// E_0 = (1/2h) sum_k (m omega_k^2 + (1 + omega_k^2/4) |b_k|^2), omega_k = 2 tan((theta_{k+1} - theta_k)/2).
/// Throws IndexedError(kAngleGap) when |theta_{k+1} - theta_k| >= pi.
double energy(const std::vector<double>& theta, const DiscreteCurve& c0, const DiscreteCurve& c1,
              const Metric& metric, Backend backend = Backend::kAuto);

/// Analytic gradient of E_0 with respect to all N+1 angles.
std::vector<double> gradient(const std::vector<double>& theta, const DiscreteCurve& c0, const DiscreteCurve& c1,
                             const Metric& metric, Backend backend = Backend::kAuto);

/// Energy and gradient from one sweep.
double energy_and_gradient(const std::vector<double>& theta, const DiscreteCurve& c0, const DiscreteCurve& c1,
                           const Metric& metric, std::vector<double>& grad, Backend backend = Backend::kAuto);

struct MinimizeOptions {
  double tol = 1e-8;
  long max_iter = 100000;
  double armijo = 1e-4;
  double shrink = 0.5;
  Backend backend = Backend::kAuto;
};

struct MinimizeResult {
  std::vector<double> theta;
  double energy = 0.0;
  double gradient_norm = 0.0;  // infinity norm
  long iterations = 0;
  bool converged = false;      // false means the iteration cap was hit; theta is the best iterate
  std::vector<double> energy_history;
};

/// Nonlinear conjugate gradients (Polak-Ribiere, restarted every N+1
/// iterations) with Armijo backtracking.
MinimizeResult minimize(const std::vector<double>& theta_init, const DiscreteCurve& c0, const DiscreteCurve& c1,
                        const Metric& metric, const MinimizeOptions& options = {});

}  // namespace relgeo
