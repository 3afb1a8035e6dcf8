#include "tpv/track.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tpv {

namespace {
constexpr std::size_t kCoarseStride = 32;
}

Track Track::oval(double outer_diameter, double aspect_ratio,
                  double half_width, double spacing) {
  if (half_width <= 0.0) throw std::invalid_argument("track: half_width must be > 0");
  if (spacing <= 0.0 || spacing > 0.05)
    throw std::invalid_argument("track: spacing must be in (0, 0.05] m");
  if (aspect_ratio <= 0.0 || aspect_ratio > 1.0)
    throw std::invalid_argument("track: aspect_ratio must be in (0, 1]");
  if (outer_diameter <= 4.0 * half_width)
    throw std::invalid_argument("track: outer_diameter must exceed 4*half_width");

  const double a = outer_diameter / 2.0 - half_width;
  const double b = a * aspect_ratio;

  // Densely sample the ellipse by parameter, then resample uniformly in arc
  // length so consecutive points are at most `spacing` apart.
  const std::size_t dense_n = 200000;
  std::vector<double> s(dense_n + 1, 0.0);
  std::vector<Vec2> dense(dense_n + 1);
  for (std::size_t i = 0; i <= dense_n; ++i) {
    const double t = 2.0 * M_PI * static_cast<double>(i) / dense_n;
    dense[i] = {a * std::cos(t), b * std::sin(t)};
    if (i > 0) s[i] = s[i - 1] + (dense[i] - dense[i - 1]).norm();
  }
  const double perimeter = s.back();
  const auto n = static_cast<std::size_t>(std::ceil(perimeter / spacing));

  Track tr;
  tr.pts_.reserve(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double si = perimeter * static_cast<double>(i) / n;
    while (j + 1 <= dense_n && s[j + 1] < si) ++j;
    const double seg = s[j + 1] - s[j];
    const double u = seg > 0.0 ? (si - s[j]) / seg : 0.0;
    tr.pts_.push_back(dense[j] + (dense[j + 1] - dense[j]) * u);
  }
  tr.half_width_ = half_width;
  tr.finalize();
  return tr;
}

Track Track::from_points(std::vector<Vec2> centerline, double half_width) {
  if (centerline.size() < 3) throw std::invalid_argument("track: need at least 3 centerline points");
  if (half_width <= 0.0) throw std::invalid_argument("track: half_width must be > 0");
  Track tr;
  tr.pts_ = std::move(centerline);
  tr.half_width_ = half_width;
  tr.finalize();
  return tr;
}

Track Track::from_csv(const std::string& path, double half_width) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("track: cannot open " + path);
  std::vector<Vec2> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double x, y;
    char comma;
    if (!(ls >> x >> comma >> y) || comma != ',')
      throw std::invalid_argument("track: malformed CSV line: " + line);
    pts.push_back({x, y});
  }
  return from_points(std::move(pts), half_width);
}

void Track::finalize() {
  const std::size_t n = pts_.size();
  arclen_.resize(n + 1);
  arclen_[0] = 0.0;
  double max_gap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (pts_[(i + 1) % n] - pts_[i]).norm();
    arclen_[i + 1] = arclen_[i] + d;
    max_gap = std::max(max_gap, d);
  }
  perimeter_ = arclen_[n];
  spacing_ = max_gap;

  coarse_stride_ = std::min<std::size_t>(kCoarseStride, n);
  coarse_.clear();
  for (std::size_t i = 0; i < n; i += coarse_stride_) coarse_.push_back(pts_[i]);
}

double Track::signed_error_at(const Vec2& p, std::size_t i) const {
  const std::size_t n = pts_.size();
  const Vec2 tangent = pts_[(i + 1) % n] - pts_[(i + n - 1) % n];
  const Vec2 d = p - pts_[i];
  const double dist = d.norm();
  return tangent.cross(d) >= 0.0 ? dist : -dist;
}

LateralSample Track::nearest_linear(const Vec2& p) const {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    const double d2 = (pts_[i] - p).squared_norm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return {pts_[best], best, signed_error_at(p, best)};
}

LateralSample Track::nearest(const Vec2& p) const {
  const std::size_t n = pts_.size();
  if (coarse_.size() <= 2) return nearest_linear(p);

  double best_rep = std::numeric_limits<double>::infinity();
  for (const auto& c : coarse_) best_rep = std::min(best_rep, (c - p).norm());

  // Any fine point in a window is within stride*spacing (arc length, hence
  // chord) of its representative, so windows whose representative is farther
  // than best_rep + stride*spacing cannot hold the minimum.
  const double cutoff = best_rep + static_cast<double>(coarse_stride_) * spacing_;
  const double cutoff2 = cutoff * cutoff;

  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t j = 0; j < coarse_.size(); ++j) {
    if ((coarse_[j] - p).squared_norm() > cutoff2) continue;
    const std::size_t lo = j * coarse_stride_;
    const std::size_t hi = std::min(lo + coarse_stride_, n);
    for (std::size_t i = lo; i < hi; ++i) {
      const double d2 = (pts_[i] - p).squared_norm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
        found = true;
      }
    }
  }
  if (!found) return nearest_linear(p);
  return {pts_[best], best, signed_error_at(p, best)};
}

bool Track::inside_lane(const Vec2& p) const {
  return std::abs(nearest(p).signed_error) <= half_width_;
}

Vec2 Track::point_at_arclength(double s) const {
  const std::size_t n = pts_.size();
  s = std::fmod(s, perimeter_);
  if (s < 0.0) s += perimeter_;
  const auto it = std::upper_bound(arclen_.begin(), arclen_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - arclen_.begin()) - 1;
  const double seg = arclen_[i + 1] - arclen_[i];
  const double u = seg > 0.0 ? (s - arclen_[i]) / seg : 0.0;
  return pts_[i % n] + (pts_[(i + 1) % n] - pts_[i % n]) * u;
}

double Track::tangent_at_arclength(double s) const {
  const std::size_t n = pts_.size();
  s = std::fmod(s, perimeter_);
  if (s < 0.0) s += perimeter_;
  const auto it = std::upper_bound(arclen_.begin(), arclen_.end(), s);
  const std::size_t i = (static_cast<std::size_t>(it - arclen_.begin()) - 1) % n;
  return tangent_at(i);
}

double Track::tangent_at(std::size_t i) const {
  const std::size_t n = pts_.size();
  const Vec2 t = pts_[(i + 1) % n] - pts_[(i + n - 1) % n];
  return std::atan2(t.y, t.x);
}

void Track::export_csv(std::ostream& os) const {
  os.precision(17);
  for (const auto& p : pts_) os << p.x << ',' << p.y << '\n';
}

void Track::export_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("track: cannot write " + path);
  export_csv(out);
}

}  // namespace tpv
