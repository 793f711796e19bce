#pragma once

#include <cstddef>

namespace relgeo::kernels {

// Structure-of-arrays view of one energy sweep. Trigonometry of theta_k is
// precomputed by the caller; c0x/c0y hold N+1 entries, the rest N.
struct SweepInput {
  const double* omega;
  const double* cos_t;
  const double* sin_t;
  const double* c0x;
  const double* c0y;
  const double* dc1x;
  const double* dc1y;
  std::size_t n;
  double m;
};

// q[k] = d_k ((m + |b_k|^2/4) omega_k - d_k b_k . R^'(omega_k) c0_{k+1})
// fg[k] = d_k b_k . J R_{-theta_k} (c1_{k+1} - c1_k)
// Both may be null for an energy-only sweep.
struct SweepOutput {
  double* q;
  double* fg;
};

// Returns sum_k (m omega_k^2 + d_k |b_k|^2).
double sweep_scalar(const SweepInput& in, const SweepOutput& out);
double sweep_avx2(const SweepInput& in, const SweepOutput& out);

}  // namespace relgeo::kernels
