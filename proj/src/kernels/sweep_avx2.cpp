#include "sweep.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif

namespace relgeo::kernels {

#if defined(__AVX2__) && defined(__FMA__)

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double sweep_avx2(const SweepInput& in, const SweepOutput& out) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d quarter = _mm256_set1_pd(0.25);
  const __m256d m = _mm256_set1_pd(in.m);
  __m256d acc = _mm256_setzero_pd();

  std::size_t k = 0;
  for (; k + 4 <= in.n; k += 4) {
    const __m256d w = _mm256_loadu_pd(in.omega + k);
    const __m256d q = _mm256_mul_pd(quarter, _mm256_mul_pd(w, w));
    const __m256d d = _mm256_add_pd(one, q);
    const __m256d inv = _mm256_div_pd(one, d);
    const __m256d omq = _mm256_sub_pd(one, q);
    const __m256d cr = _mm256_mul_pd(omq, inv);
    const __m256d sr = _mm256_mul_pd(w, inv);

    const __m256d ct = _mm256_loadu_pd(in.cos_t + k);
    const __m256d st = _mm256_loadu_pd(in.sin_t + k);
    const __m256d dx = _mm256_loadu_pd(in.dc1x + k);
    const __m256d dy = _mm256_loadu_pd(in.dc1y + k);
    const __m256d rx = _mm256_fmadd_pd(ct, dx, _mm256_mul_pd(st, dy));
    const __m256d ry = _mm256_fmsub_pd(ct, dy, _mm256_mul_pd(st, dx));

    const __m256d cx = _mm256_loadu_pd(in.c0x + k + 1);
    const __m256d cy = _mm256_loadu_pd(in.c0y + k + 1);
    const __m256d hx = _mm256_fmsub_pd(cr, cx, _mm256_mul_pd(sr, cy));
    const __m256d hy = _mm256_fmadd_pd(sr, cx, _mm256_mul_pd(cr, cy));
    const __m256d bx = _mm256_add_pd(_mm256_sub_pd(rx, hx), _mm256_loadu_pd(in.c0x + k));
    const __m256d by = _mm256_add_pd(_mm256_sub_pd(ry, hy), _mm256_loadu_pd(in.c0y + k));
    const __m256d bb = _mm256_fmadd_pd(bx, bx, _mm256_mul_pd(by, by));
    acc = _mm256_add_pd(acc, _mm256_fmadd_pd(_mm256_mul_pd(m, w), w, _mm256_mul_pd(d, bb)));

    if (out.q != nullptr) {
      const __m256d inv2 = _mm256_mul_pd(inv, inv);
      const __m256d dc = _mm256_mul_pd(_mm256_sub_pd(_mm256_setzero_pd(), w), inv2);
      const __m256d ds = _mm256_mul_pd(omq, inv2);
      const __m256d px = _mm256_fmsub_pd(dc, cx, _mm256_mul_pd(ds, cy));
      const __m256d py = _mm256_fmadd_pd(ds, cx, _mm256_mul_pd(dc, cy));
      const __m256d bp = _mm256_fmadd_pd(bx, px, _mm256_mul_pd(by, py));
      const __m256d lin = _mm256_mul_pd(_mm256_fmadd_pd(quarter, bb, m), w);
      _mm256_storeu_pd(out.q + k, _mm256_mul_pd(d, _mm256_fnmadd_pd(d, bp, lin)));
      _mm256_storeu_pd(out.fg + k, _mm256_mul_pd(d, _mm256_fmsub_pd(bx, ry, _mm256_mul_pd(by, rx))));
    }
  }

  double total = hsum(acc);
  if (k < in.n) {
    SweepInput tail = in;
    tail.omega += k;
    tail.cos_t += k;
    tail.sin_t += k;
    tail.c0x += k;
    tail.c0y += k;
    tail.dc1x += k;
    tail.dc1y += k;
    tail.n = in.n - k;
    SweepOutput tail_out{out.q != nullptr ? out.q + k : nullptr, out.fg != nullptr ? out.fg + k : nullptr};
    total += sweep_scalar(tail, tail_out);
  }
  return total;
}

#else

double sweep_avx2(const SweepInput& in, const SweepOutput& out) { return sweep_scalar(in, out); }

#endif

}  // namespace relgeo::kernels
