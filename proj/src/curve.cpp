#include "relgeo/curve.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "relgeo/errors.hpp"

namespace relgeo {

namespace {

constexpr double kPi = std::numbers::pi;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

Vec2 evaluate(const CurveSpec& spec, double s) {
  switch (spec.kind) {
    case CurveKind::kPoint: return spec.offset;
    case CurveKind::kSegment: return s * spec.direction;
    case CurveKind::kCircle:
      return {spec.radius * std::cos(2.0 * kPi * s), spec.radius * std::sin(2.0 * kPi * s)};
    case CurveKind::kSemicircle: return {std::cos(kPi * s), std::sin(kPi * s)};
    case CurveKind::kFigureEight: return {std::sin(4.0 * kPi * s), std::sin(2.0 * kPi * s)};
    case CurveKind::kPolynomial: break;
  }
  throw Error(ErrorKind::kUnsupportedSpec, "spec has no closed-form parametrization");
}

}  // namespace

DiscreteCurve::DiscreteCurve(std::vector<Vec2> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw Error(ErrorKind::kTooFewPoints, "a discrete curve needs at least two points");
  }
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (!std::isfinite(points_[k].x) || !std::isfinite(points_[k].y)) {
      throw IndexedError(ErrorKind::kInvalidArgument, k, "non-finite curve coordinate");
    }
  }
}

CurveSpec parse_curve_spec(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  const std::string_view name = trim(text.substr(0, colon));
  std::map<std::string, double, std::less<>> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      double value = 0.0;
      if (eq == std::string_view::npos || !parse_double(item.substr(eq + 1), value)) {
        throw Error(ErrorKind::kParseError, fmt::format("malformed curve parameter '{}'", item));
      }
      params.emplace(std::string(trim(item.substr(0, eq))), value);
    }
  }

  auto take = [&](std::string_view key, double fallback) {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    const double v = it->second;
    params.erase(it);
    return v;
  };

  CurveSpec spec;
  if (name == "point") {
    spec = CurveSpec::point({take("x", 0.0), take("y", 0.0)});
  } else if (name == "segment") {
    spec = CurveSpec::segment({take("dx", 1.0), take("dy", 0.0)});
  } else if (name == "circle") {
    spec = CurveSpec::circle(take("r", 1.0));
    if (!(spec.radius > 0.0)) throw Error(ErrorKind::kInvalidArgument, "circle radius must be positive");
  } else if (name == "semicircle") {
    spec = CurveSpec::semicircle();
  } else if (name == "eight" || name == "figure-eight") {
    spec = CurveSpec::figure_eight();
  } else if (name == "poly") {
    const double p = take("p", 1.0);
    if (p < 1.0 || p != std::floor(p)) {
      throw Error(ErrorKind::kInvalidArgument, "polynomial exponent must be an integer >= 1");
    }
    spec = CurveSpec::polynomial(static_cast<int>(p));
  } else {
    throw Error(ErrorKind::kUnsupportedSpec, fmt::format("unknown curve kind '{}'", name));
  }
  if (!params.empty()) {
    throw Error(ErrorKind::kUnsupportedSpec,
                fmt::format("unknown parameter '{}' for curve '{}'", params.begin()->first, name));
  }
  return spec;
}

DiscreteCurve sample(const CurveSpec& spec, std::size_t n) {
  if (n < 1) throw Error(ErrorKind::kTooFewPoints, "sampling needs N >= 1");
  if (spec.kind == CurveKind::kPolynomial) return sample_polynomial_arclength(spec.exponent, n);
  std::vector<Vec2> pts(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    pts[k] = evaluate(spec, static_cast<double>(k) / static_cast<double>(n));
  }
  return DiscreteCurve(std::move(pts));
}

DiscreteCurve sample_polynomial_arclength(int p, std::size_t n) {
  if (p < 1) throw Error(ErrorKind::kInvalidArgument, "polynomial exponent must be >= 1");
  if (n < 1) throw Error(ErrorKind::kTooFewPoints, "sampling needs N >= 1");

  // x'(s) = 1 / sqrt(1 + p^2 x^(2p-2)), x(0) = 0, fixed-step RK4.
  const double pp = static_cast<double>(p);
  auto rate = [pp](double x) {
    const double slope = pp * std::pow(x, pp - 1.0);
    return 1.0 / std::sqrt(1.0 + slope * slope);
  };
  constexpr double kMaxSubstep = 1e-4;
  const double interval = 1.0 / static_cast<double>(n);
  const auto substeps = static_cast<std::size_t>(std::ceil(interval / kMaxSubstep - 1e-9));
  const double ds = interval / static_cast<double>(substeps);

  std::vector<Vec2> pts(n + 1);
  double x = 0.0;
  pts[0] = {0.0, 0.0};
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < substeps; ++i) {
      const double k1 = rate(x);
      const double k2 = rate(x + 0.5 * ds * k1);
      const double k3 = rate(x + 0.5 * ds * k2);
      const double k4 = rate(x + ds * k3);
      x += ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    pts[k] = {x, std::pow(x, pp)};
  }
  return DiscreteCurve(std::move(pts));
}

DiscreteCurve transform(const GroupElement& g, const DiscreteCurve& curve) {
  std::vector<Vec2> pts;
  pts.reserve(curve.size());
  const Mat2 r = rotation(g.theta);
  for (const Vec2& c : curve.points()) pts.push_back(r * c + g.x);
  return DiscreteCurve(std::move(pts));
}

std::pair<DiscreteCurve, GroupElement> normalize(const DiscreteCurve& curve, NormalizeMode mode) {
  const Vec2 origin = curve[0];
  double angle = 0.0;
  if (mode == NormalizeMode::kRotate) {
    const Vec2 chord = curve[1] - origin;
    if (chord.x == 0.0 && chord.y == 0.0) {
      throw Error(ErrorKind::kDegenerateTangent, "first chord has zero length");
    }
    angle = std::atan2(chord.y, chord.x);
  }
  const GroupElement g{-angle, -(rotation(-angle) * origin)};
  std::vector<Vec2> pts;
  pts.reserve(curve.size());
  const Mat2 r = rotation(-angle);
  for (const Vec2& c : curve.points()) pts.push_back(r * (c - origin));
  pts[0] = {0.0, 0.0};
  return {DiscreteCurve(std::move(pts)), g};
}

double total_absolute_curvature(const DiscreteCurve& curve) {
  if (curve.size() < 3) throw Error(ErrorKind::kTooFewPoints, "curvature needs N >= 2");
  double total = 0.0;
  for (std::size_t k = 1; k + 1 < curve.size(); ++k) {
    const Vec2 a = curve[k] - curve[k - 1];
    const Vec2 b = curve[k + 1] - curve[k];
    total += std::abs(std::atan2(cross(a, b), dot(a, b)));
  }
  return total;
}

DiscreteCurve parse_csv(std::string_view text) {
  std::vector<Vec2> pts;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (pts.empty() && line_no == 1 && line == "x,y") continue;
    const auto comma = line.find(',');
    Vec2 p;
    if (comma == std::string_view::npos || !parse_double(line.substr(0, comma), p.x) ||
        !parse_double(line.substr(comma + 1), p.y)) {
      throw IndexedError(ErrorKind::kParseError, line_no, fmt::format("cannot parse '{}' as x,y", line));
    }
    pts.push_back(p);
  }
  if (pts.size() < 2) throw Error(ErrorKind::kTooFewPoints, "curve file holds fewer than two points");
  return DiscreteCurve(std::move(pts));
}

DiscreteCurve load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParseError, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string to_csv(const DiscreteCurve& curve) {
  std::string out = "x,y\n";
  for (const Vec2& p : curve.points()) out += fmt::format("{:.17g},{:.17g}\n", p.x, p.y);
  return out;
}

void save_csv(const DiscreteCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidArgument, fmt::format("cannot write '{}'", path.string()));
  out << to_csv(curve);
}

}  // namespace relgeo
