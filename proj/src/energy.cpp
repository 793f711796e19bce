#include "relgeo/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kernels/sweep.hpp"
#include "relgeo/discrete.hpp"
#include "relgeo/errors.hpp"

namespace relgeo {

namespace {

struct SweepBuffers {
  std::vector<double> omega, cos_t, sin_t, c0x, c0y, dc1x, dc1y, q, fg;
};

void fill(const std::vector<double>& theta, const DiscreteCurve& c0, const DiscreteCurve& c1, SweepBuffers& buf) {
  require_same_length(c0, c1);
  const std::size_t n = c0.intervals();
  if (theta.size() != n + 1) throw Error(ErrorKind::kInvalidArgument, "angle vector must have N+1 entries");
  buf.omega.resize(n);
  buf.cos_t.resize(n);
  buf.sin_t.resize(n);
  buf.dc1x.resize(n);
  buf.dc1y.resize(n);
  buf.c0x.resize(n + 1);
  buf.c0y.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    if (!std::isfinite(theta[k])) throw IndexedError(ErrorKind::kInvalidArgument, k, "non-finite angle");
    buf.c0x[k] = c0[k].x;
    buf.c0y[k] = c0[k].y;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double gap = theta[k + 1] - theta[k];
    if (std::abs(gap) >= std::numbers::pi) {
      throw IndexedError(ErrorKind::kAngleGap, k, "consecutive angles differ by pi or more");
    }
    buf.omega[k] = 2.0 * std::tan(0.5 * gap);
    buf.cos_t[k] = std::cos(theta[k]);
    buf.sin_t[k] = std::sin(theta[k]);
    const Vec2 d = c1[k + 1] - c1[k];
    buf.dc1x[k] = d.x;
    buf.dc1y[k] = d.y;
  }
}

double run(SweepBuffers& buf, double m, bool with_gradient, Backend backend) {
  const kernels::SweepInput in{buf.omega.data(), buf.cos_t.data(), buf.sin_t.data(), buf.c0x.data(),
                               buf.c0y.data(),   buf.dc1x.data(),  buf.dc1y.data(),  buf.omega.size(), m};
  kernels::SweepOutput out{nullptr, nullptr};
  if (with_gradient) {
    buf.q.resize(in.n);
    buf.fg.resize(in.n);
    out = {buf.q.data(), buf.fg.data()};
  }
  return resolve_backend(backend) == Backend::kAvx2 ? kernels::sweep_avx2(in, out) : kernels::sweep_scalar(in, out);
}

}  // namespace

bool avx2_available() {
#if defined(RELGEO_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend resolve_backend(Backend requested) {
  if (requested == Backend::kAuto) return avx2_available() ? Backend::kAvx2 : Backend::kScalar;
  if (requested == Backend::kAvx2 && !avx2_available()) {
    throw Error(ErrorKind::kInvalidArgument, "AVX2 backend is not available on this machine");
  }
  return requested;
}

double energy(const std::vector<double>& theta, const DiscreteCurve& c0, const DiscreteCurve& c1,
              const Metric& metric, Backend backend) {
  SweepBuffers buf;
  fill(theta, c0, c1, buf);
  return 0.5 * static_cast<double>(c0.intervals()) * run(buf, metric.m(), false, backend);
}

double energy_and_gradient(const std::vector<double>& theta, const DiscreteCurve& c0, const DiscreteCurve& c1,
                           const Metric& metric, std::vector<double>& grad, Backend backend) {
  SweepBuffers buf;
  fill(theta, c0, c1, buf);
  const std::size_t n = c0.intervals();
  const double scale = static_cast<double>(n);
  const double e = 0.5 * scale * run(buf, metric.m(), true, backend);
  grad.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    grad[k] += buf.fg[k] - buf.q[k];
    grad[k + 1] += buf.q[k];
  }
  for (double& g : grad) g *= scale;
  return e;
}

std::vector<double> gradient(const std::vector<double>& theta, const DiscreteCurve& c0, const DiscreteCurve& c1,
                             const Metric& metric, Backend backend) {
  std::vector<double> g;
  energy_and_gradient(theta, c0, c1, metric, g, backend);
  return g;
}

namespace {

double inf_norm(const std::vector<double>& v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

MinimizeResult minimize(const std::vector<double>& theta_init, const DiscreteCurve& c0, const DiscreteCurve& c1,
                        const Metric& metric, const MinimizeOptions& options) {
  MinimizeResult res;
  res.theta = theta_init;
  std::vector<double> g;
  res.energy = energy_and_gradient(res.theta, c0, c1, metric, g, options.backend);
  res.gradient_norm = inf_norm(g);
  res.energy_history.push_back(res.energy);
  if (res.gradient_norm < options.tol) {
    res.converged = true;
    return res;
  }

  const std::size_t dim = res.theta.size();
  std::vector<double> dir(dim);
  for (std::size_t i = 0; i < dim; ++i) dir[i] = -g[i];
  std::vector<double> trial(dim);
  std::vector<double> g_new;
  std::vector<double> scratch(dim);
  std::vector<double> g_scratch;
  double step = std::min(1.0, 0.1 / res.gradient_norm);
  long since_restart = 0;

  for (res.iterations = 1; res.iterations <= options.max_iter; ++res.iterations) {
    double slope = dot(g, dir);
    if (!(slope < 0.0)) {
      for (std::size_t i = 0; i < dim; ++i) dir[i] = -g[i];
      slope = dot(g, dir);
      since_restart = 0;
    }

    bool accepted = false;
    double e_new = 0.0;
    double alpha = step;
    // Near the minimum energy changes fall below rounding, so a step whose energy is
    // flat to rounding also passes when the (accurate) directional derivative shows progress.
    const double flat = res.energy + 1e-13 * std::abs(res.energy);
    auto acceptable = [&](double a, double e, double s_new) {
      return e <= res.energy + options.armijo * a * slope ||
             (e <= flat && s_new >= 0.9 * slope && s_new <= (2.0 * options.armijo - 1.0) * slope);
    };
    double slope_new = 0.0;
    for (int ls = 0; ls < 200; ++ls) {
      for (std::size_t i = 0; i < dim; ++i) trial[i] = res.theta[i] + alpha * dir[i];
      try {
        e_new = energy_and_gradient(trial, c0, c1, metric, g_new, options.backend);
        slope_new = dot(g_new, dir);
        if (acceptable(alpha, e_new, slope_new)) {
          accepted = true;
          break;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kAngleGap) throw;
      }
      alpha *= options.shrink;
    }
    // Secant refinement of the directional derivative keeps the conjugate directions useful.
    for (int polish = 0; accepted && polish < 3 && std::abs(slope_new) > 0.1 * std::abs(slope); ++polish) {
      if (!(slope_new > slope)) break;
      const double a_s = alpha * slope / (slope - slope_new);
      if (!(a_s > 0.0) || !std::isfinite(a_s)) break;
      for (std::size_t i = 0; i < dim; ++i) scratch[i] = res.theta[i] + a_s * dir[i];
      double e_s = 0.0;
      try {
        e_s = energy_and_gradient(scratch, c0, c1, metric, g_scratch, options.backend);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kAngleGap) throw;
        break;
      }
      const double s_s = dot(g_scratch, dir);
      if (!acceptable(a_s, e_s, s_s) || e_s > e_new + 1e-13 * std::abs(e_new)) break;
      alpha = a_s;
      e_new = e_s;
      slope_new = s_s;
      trial.swap(scratch);
      g_new.swap(g_scratch);
    }
    if (!accepted) {
      // No decrease along this direction at any representable step: stationary to rounding.
      if (since_restart == 0) break;
      for (std::size_t i = 0; i < dim; ++i) dir[i] = -g[i];
      since_restart = 0;
      continue;
    }

    double beta = 0.0;
    ++since_restart;
    if (since_restart < static_cast<long>(dim)) {
      double num = 0.0;
      for (std::size_t i = 0; i < dim; ++i) num += g_new[i] * (g_new[i] - g[i]);
      beta = std::max(0.0, num / dot(g, g));
    } else {
      since_restart = 0;
    }
    for (std::size_t i = 0; i < dim; ++i) dir[i] = -g_new[i] + beta * dir[i];

    res.theta.swap(trial);
    g.swap(g_new);
    res.energy = e_new;
    res.gradient_norm = inf_norm(g);
    res.energy_history.push_back(res.energy);
    step = std::min(alpha * 4.0, 1e6);
    if (res.gradient_norm < options.tol) {
      res.converged = true;
      return res;
    }
  }
  res.iterations = std::min(res.iterations, options.max_iter);
  // Flat-to-rounding steps may leave the energy a hair above the start; never return worse than theta_init.
  if (res.energy > res.energy_history.front()) {
    res.theta = theta_init;
    res.energy = res.energy_history.front();
    res.gradient_norm = inf_norm(gradient(theta_init, c0, c1, metric, options.backend));
  }
  return res;
}

}  // namespace relgeo
