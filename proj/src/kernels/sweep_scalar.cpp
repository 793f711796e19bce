#include "sweep.hpp"

namespace relgeo::kernels {

double sweep_scalar(const SweepInput& in, const SweepOutput& out) {
  double total = 0.0;
  for (std::size_t k = 0; k < in.n; ++k) {
    const double w = in.omega[k];
    const double q = 0.25 * w * w;
    const double d = 1.0 + q;
    const double inv = 1.0 / d;
    const double cr = (1.0 - q) * inv;
    const double sr = w * inv;

    const double rx = in.cos_t[k] * in.dc1x[k] + in.sin_t[k] * in.dc1y[k];
    const double ry = -in.sin_t[k] * in.dc1x[k] + in.cos_t[k] * in.dc1y[k];
    const double cx = in.c0x[k + 1];
    const double cy = in.c0y[k + 1];
    const double bx = rx - (cr * cx - sr * cy) + in.c0x[k];
    const double by = ry - (sr * cx + cr * cy) + in.c0y[k];
    const double bb = bx * bx + by * by;
    total += in.m * w * w + d * bb;

    if (out.q != nullptr) {
      const double inv2 = inv * inv;
      const double dc = -w * inv2;
      const double ds = (1.0 - q) * inv2;
      const double px = dc * cx - ds * cy;
      const double py = ds * cx + dc * cy;
      out.q[k] = d * ((in.m + 0.25 * bb) * w - d * (bx * px + by * py));
      out.fg[k] = d * (bx * ry - by * rx);
    }
  }
  return total;
}

}  // namespace relgeo::kernels
