#pragma once

#include <vector>

#include "relgeo/curve.hpp"
#include "relgeo/discrete.hpp"

namespace relgeo {

struct MorphFrame {
  double epsilon = 0.0;
  DiscreteCurve curve;
};

/// exp(epsilon log g). Throws kLogUndefined when g rotates by pi.
GroupElement interpolate_element(const GroupElement& g, double epsilon);

/// Frames c_eps = g_eps . c0 on a uniform epsilon grid over [0, 1].
/// Throws IndexedError(kLogUndefined) naming the offending node.
std::vector<MorphFrame> morph(const GeodesicPath& path, const DiscreteCurve& c0, std::size_t frames);

}  // namespace relgeo
