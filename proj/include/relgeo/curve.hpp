#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relgeo/se2.hpp"

namespace relgeo {

/// N+1 planar samples on a uniform parameter grid over [0, 1], h = 1/N.
/// Curves are open polylines; a closed shape simply repeats its first point.
class DiscreteCurve {
 public:
  explicit DiscreteCurve(std::vector<Vec2> points);

  std::size_t intervals() const noexcept { return points_.size() - 1; }
  double step() const noexcept { return 1.0 / static_cast<double>(intervals()); }

  const std::vector<Vec2>& points() const noexcept { return points_; }
  const Vec2& operator[](std::size_t k) const { return points_[k]; }
  std::size_t size() const noexcept { return points_.size(); }

 private:
  std::vector<Vec2> points_;
};

enum class CurveKind { kPoint, kSegment, kCircle, kSemicircle, kFigureEight, kPolynomial };

/// Analytic curve family plus its parameters. Only the fields relevant to
/// `kind` are read.
struct CurveSpec {
  CurveKind kind = CurveKind::kPoint;
  double radius = 1.0;          // circle
  Vec2 offset{};                // point location
  Vec2 direction{1.0, 0.0};     // segment: s -> s * direction
  int exponent = 1;             // polynomial y = x^p, arclength parametrized

  static CurveSpec point(Vec2 at = {}) { return {CurveKind::kPoint, 1.0, at}; }
  static CurveSpec segment(Vec2 dir) { return {CurveKind::kSegment, 1.0, {}, dir}; }
  static CurveSpec circle(double r = 1.0) { return {CurveKind::kCircle, r}; }
  static CurveSpec semicircle() { return {CurveKind::kSemicircle}; }
  static CurveSpec figure_eight() { return {CurveKind::kFigureEight}; }
  static CurveSpec polynomial(int p) { return {CurveKind::kPolynomial, 1.0, {}, {1.0, 0.0}, p}; }
};

/// Parses `point`, `point:x=1,y=2`, `segment:dx=0,dy=1`, `circle:r=1`,
/// `semicircle`, `eight`, `poly:p=6`.
CurveSpec parse_curve_spec(std::string_view text);

/// Uniform parameter sampling s_k = k/N of an analytic spec.
DiscreteCurve sample(const CurveSpec& spec, std::size_t n);

/// Unit-arclength sampling of y = x^p starting at the origin.
DiscreteCurve sample_polynomial_arclength(int p, std::size_t n);

enum class NormalizeMode { kRotate, kTranslateOnly };

/// Maps the curve by one rigid motion so that it starts at the origin and,
/// in rotate mode, its first chord points along +x. Returns the motion used.
std::pair<DiscreteCurve, GroupElement> normalize(const DiscreteCurve& curve,
                                                 NormalizeMode mode = NormalizeMode::kRotate);

DiscreteCurve transform(const GroupElement& g, const DiscreteCurve& curve);

/// Sum of absolute exterior angles at interior vertices.
double total_absolute_curvature(const DiscreteCurve& curve);

DiscreteCurve load_csv(const std::filesystem::path& path);
DiscreteCurve parse_csv(std::string_view text);
void save_csv(const DiscreteCurve& curve, const std::filesystem::path& path);
std::string to_csv(const DiscreteCurve& curve);

}  // namespace relgeo
