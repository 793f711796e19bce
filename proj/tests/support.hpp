#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "relgeo/curve.hpp"
#include "relgeo/se2.hpp"

namespace relgeo::testing {

// Smooth open curve s -> (a s + sum_j u_j sin(j pi s), b s + sum_j w_j sin(j pi s)) sampled at N+1 points.
inline DiscreteCurve random_curve(std::mt19937_64& rng, std::size_t n, double amplitude = 0.3) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = 0.5 + 0.5 * std::abs(u(rng));
  const double b = 0.5 * u(rng);
  double cx[3], cy[3];
  for (int j = 0; j < 3; ++j) {
    cx[j] = amplitude * u(rng) / (j + 1);
    cy[j] = amplitude * u(rng) / (j + 1);
  }
  std::vector<Vec2> pts(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(n);
    Vec2 p{a * s, b * s};
    for (int j = 0; j < 3; ++j) {
      const double sj = std::sin((j + 1) * 3.141592653589793 * s);
      p.x += cx[j] * sj;
      p.y += cy[j] * sj;
    }
    pts[k] = p;
  }
  return DiscreteCurve(std::move(pts));
}

inline DiscreteCurve random_normalized_curve(std::mt19937_64& rng, std::size_t n, double amplitude = 0.3) {
  return normalize(random_curve(rng, n, amplitude)).first;
}

inline GroupElement random_element(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {3.0 * u(rng), {2.0 * u(rng), 2.0 * u(rng)}};
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace relgeo::testing
