#include "relgeo/morph.hpp"

#include "relgeo/errors.hpp"

namespace relgeo {

GroupElement interpolate_element(const GroupElement& g, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "interpolation parameter must lie in [0, 1]");
  }
  if (epsilon == 0.0) return GroupElement::identity();
  return exp_se2(epsilon * log_se2(g));
}

std::vector<MorphFrame> morph(const GeodesicPath& path, const DiscreteCurve& c0, std::size_t frames) {
  if (frames < 2) throw Error(ErrorKind::kInvalidArgument, "morph needs at least two frames");
  if (path.theta.size() != c0.size()) throw Error(ErrorKind::kInvalidArgument, "path and curve lengths differ");

  const std::size_t n = c0.size();
  std::vector<AlgebraElement> logs(n);
  for (std::size_t k = 0; k < n; ++k) {
    try {
      logs[k] = log_se2({path.theta[k], path.x[k]});
    } catch (const Error&) {
      throw IndexedError(ErrorKind::kLogUndefined, k, "pointwise rotation of pi has no logarithm");
    }
  }

  std::vector<MorphFrame> out;
  out.reserve(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    const double eps = static_cast<double>(f) / static_cast<double>(frames - 1);
    std::vector<Vec2> pts(n);
    for (std::size_t k = 0; k < n; ++k) {
      // The last frame uses g itself so it reproduces c1 without exp/log round-off.
      const GroupElement g = f + 1 == frames ? GroupElement{path.theta[k], path.x[k]}
                                             : (f == 0 ? GroupElement::identity() : exp_se2(eps * logs[k]));
      pts[k] = act(g, c0[k]);
    }
    out.push_back({eps, DiscreteCurve(std::move(pts))});
  }
  return out;
}

}  // namespace relgeo
