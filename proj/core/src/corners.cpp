#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <optional>

#include "dseqmark/error.hpp"
#include "dseqmark/features.hpp"

namespace dseqmark {

namespace {

constexpr int kMaxSpurLength = 4;
constexpr std::size_t kSeamTolerance = 3;

struct Point {
  double x = 0;
  double y = 0;
};

struct Contour {
  std::vector<CornerPoint> pixels;
  bool closed = false;
};

EdgeMap zhang_suen(EdgeMap map) {
  const int w = map.width();
  const int h = map.height();
  const auto px = [&](int x, int y) -> int {
    return (x < 0 || y < 0 || x >= w || y >= h) ? 0 : map.at(x, y);
  };
  std::vector<std::pair<int, int>> doomed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      doomed.clear();
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (!map.at(x, y)) continue;
          // P2..P9 clockwise from north.
          const int p[8] = {px(x, y - 1), px(x + 1, y - 1), px(x + 1, y), px(x + 1, y + 1),
                            px(x, y + 1), px(x - 1, y + 1), px(x - 1, y), px(x - 1, y - 1)};
          const int neighbours = std::accumulate(p, p + 8, 0);
          if (neighbours < 2 || neighbours > 6) continue;
          int transitions = 0;
          for (int k = 0; k < 8; ++k) transitions += (p[k] == 0 && p[(k + 1) % 8] == 1);
          if (transitions != 1) continue;
          if (pass == 0) {
            if (p[0] * p[2] * p[4] != 0 || p[2] * p[4] * p[6] != 0) continue;
          } else {
            if (p[0] * p[2] * p[6] != 0 || p[0] * p[4] * p[6] != 0) continue;
          }
          doomed.emplace_back(x, y);
        }
      }
      for (const auto& [x, y] : doomed) map.set(x, y, false);
      changed = changed || !doomed.empty();
    }
  }
  return map;
}

// Removes side branches of at most `max_len` pixels that hang off a
// junction. Neighbours that touch each other count as one branch, so
// staircase steps are not mistaken for junctions.
EdgeMap prune_spurs(EdgeMap map, int max_len) {
  const int w = map.width();
  const int h = map.height();
  const auto on = [&](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h && map.at(x, y); };

  // Unvisited 8-neighbours of p, grouped into 8-connected clusters.
  const auto branches = [&](CornerPoint p, const std::vector<CornerPoint>& visited) {
    std::vector<CornerPoint> nb;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if ((dx || dy) && on(p.x + dx, p.y + dy)) {
          const CornerPoint q{p.x + dx, p.y + dy};
          if (std::none_of(visited.begin(), visited.end(), [&](const CornerPoint& v) { return v.x == q.x && v.y == q.y; }))
            nb.push_back(q);
        }
      }
    }
    std::vector<int> label(nb.size(), -1);
    int clusters = 0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (label[i] >= 0) continue;
      std::vector<std::size_t> stack{i};
      label[i] = clusters;
      while (!stack.empty()) {
        const std::size_t a = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < nb.size(); ++b) {
          if (label[b] < 0 && std::abs(nb[a].x - nb[b].x) <= 1 && std::abs(nb[a].y - nb[b].y) <= 1) {
            label[b] = clusters;
            stack.push_back(b);
          }
        }
      }
      ++clusters;
    }
    // Prefer the 4-adjacent member when stepping along a single branch.
    std::sort(nb.begin(), nb.end(), [&](const CornerPoint& a, const CornerPoint& b) {
      return std::abs(a.x - p.x) + std::abs(a.y - p.y) < std::abs(b.x - p.x) + std::abs(b.y - p.y);
    });
    return std::make_pair(clusters, nb);
  };

  std::vector<CornerPoint> ends;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (on(x, y) && branches({x, y}, {}).second.size() == 1) ends.push_back({x, y});
    }
  }
  for (const auto& e : ends) {
    if (!on(e.x, e.y)) continue;
    std::vector<CornerPoint> path{e};
    bool junction = false;
    while (static_cast<int>(path.size()) <= max_len + 1) {
      const auto [count, nb] = branches(path.back(), path);
      if (count == 0) break;
      if (count > 1) {
        junction = true;
        break;
      }
      path.push_back(nb.front());
    }
    // path.back() is the junction itself and stays.
    if (junction) {
      for (std::size_t i = 0; i + 1 < path.size(); ++i) map.set(path[i].x, path[i].y, false);
    }
  }
  return map;
}

// Links thinned edge pixels into ordered contours. Each step takes the
// nearest unvisited pixel, first among the 8-neighbours and then within
// `max_gap + 1` to bridge dropouts.
std::vector<Contour> extract_contours(EdgeMap remaining, int max_gap, double min_length) {
  const int w = remaining.width();
  const int h = remaining.height();

  const auto next_from = [&](CornerPoint p) -> std::optional<CornerPoint> {
    for (int r = 1; r <= max_gap + 1; ++r) {
      std::optional<CornerPoint> best;
      int best_d = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int nx = p.x + dx;
          const int ny = p.y + dy;
          if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (!remaining.at(nx, ny)) continue;
          const int d = dx * dx + dy * dy;
          if (!best || d < best_d) {
            best = CornerPoint{nx, ny};
            best_d = d;
          }
        }
      }
      if (best) return best;
    }
    return std::nullopt;
  };

  std::vector<Contour> contours;
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      if (!remaining.at(x0, y0)) continue;
      const CornerPoint start{x0, y0};
      remaining.set(x0, y0, false);
      std::vector<CornerPoint> forward{start};
      for (auto p = next_from(start); p; p = next_from(*p)) {
        remaining.set(p->x, p->y, false);
        forward.push_back(*p);
      }
      std::vector<CornerPoint> backward;
      for (auto p = next_from(start); p; p = next_from(*p)) {
        remaining.set(p->x, p->y, false);
        backward.push_back(*p);
      }
      if (static_cast<double>(forward.size() + backward.size()) <= min_length) continue;
      Contour c;
      c.pixels.assign(backward.rbegin(), backward.rend());
      c.pixels.insert(c.pixels.end(), forward.begin(), forward.end());
      const auto& a = c.pixels.front();
      const auto& b = c.pixels.back();
      c.closed = (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) <= 32;
      contours.push_back(std::move(c));
    }
  }
  return contours;
}

std::vector<double> gaussian_kernel(double sigma) {
  int half = 1;
  for (int k = 1; k <= 30; ++k) {
    if (std::exp(-(k * k) / (2.0 * sigma * sigma)) > 1e-4) half = k;
  }
  std::vector<double> g(static_cast<std::size_t>(2 * half + 1));
  for (int k = -half; k <= half; ++k) g[static_cast<std::size_t>(k + half)] = std::exp(-(k * k) / (2.0 * sigma * sigma));
  const double sum = std::accumulate(g.begin(), g.end(), 0.0);
  for (auto& v : g) v /= sum;
  return g;
}

std::vector<double> central_difference(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  d[0] = v[1] - v[0];
  d[n - 1] = v[n - 1] - v[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / 2.0;
  return d;
}

double direction_deg(double dx, double dy) { return std::arg(std::complex<double>(dx, dy)) * 180.0 / std::numbers::pi; }

// Tangent direction at one end of `arm` (arm[0] is the corner): straight
// chord or the tangent of the circle through three arm points.
double arm_direction(const std::vector<Point>& arm) {
  const std::size_t len = arm.size();
  if (len <= 3) return direction_deg(arm[len - 1].x - arm[0].x, arm[len - 1].y - arm[0].y);
  Point p1 = arm[0];
  Point p2;
  Point p3;
  const bool ends_differ = arm[0].x != arm[len - 1].x || arm[0].y != arm[len - 1].y;
  if (ends_differ) {
    p2 = arm[static_cast<std::size_t>(std::ceil(len / 2.0)) - 1];
    p3 = arm[len - 1];
  } else {
    p2 = arm[static_cast<std::size_t>(std::ceil(len / 3.0)) - 1];
    p3 = arm[static_cast<std::size_t>(std::ceil(2.0 * len / 3.0)) - 1];
  }
  const double cross = (p1.x - p2.x) * (p1.y - p3.y) - (p1.x - p3.x) * (p1.y - p2.y);
  if (std::abs(cross) < 1e-8) return direction_deg(p2.x - p1.x, p2.y - p1.y);
  const double x1 = p1.x, y1 = p1.y, x2 = p2.x, y2 = p2.y, x3 = p3.x, y3 = p3.y;
  const double den = -y1 * x2 + y1 * x3 + y3 * x2 + x1 * y2 - x1 * y3 - x3 * y2;
  const double cx = 0.5 *
                    (-y1 * x2 * x2 + y3 * x2 * x2 - y3 * y1 * y1 - y3 * x1 * x1 - y2 * y3 * y3 + x3 * x3 * y1 +
                     y2 * y1 * y1 - y2 * x3 * x3 - y2 * y2 * y1 + y2 * x1 * x1 + y3 * y3 * y1 + y2 * y2 * y3) /
                    den;
  const double cy = -0.5 *
                    (x1 * x1 * x2 - x1 * x1 * x3 + y1 * y1 * x2 - y1 * y1 * x3 + x1 * x3 * x3 - x1 * x2 * x2 -
                     x3 * x3 * x2 - y3 * y3 * x2 + x3 * y2 * y2 + x1 * y3 * y3 - x1 * y2 * y2 + x3 * x2 * x2) /
                    den;
  const double radial = std::arg(std::complex<double>(cx - x1, cy - y1));
  const double adjacent = std::arg(std::complex<double>(x2 - x1, y2 - y1));
  const double s = std::sin(adjacent - radial);
  const double sign = s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
  return (sign * std::numbers::pi / 2 + radial) * 180.0 / std::numbers::pi;
}

// Angle between the two arms of the smoothed curve meeting at `center`
// within [first, last].
double corner_angle(const std::vector<Point>& curve, std::size_t first, std::size_t last, std::size_t center) {
  std::vector<Point> back;
  for (std::size_t i = center + 1; i-- > first;) back.push_back(curve[i]);
  std::vector<Point> ahead(curve.begin() + static_cast<std::ptrdiff_t>(center),
                           curve.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  return std::abs(arm_direction(back) - arm_direction(ahead));
}

std::vector<std::size_t> contour_corners(const Contour& contour, const std::vector<double>& gauss,
                                         const CssParams& params) {
  const auto& px = contour.pixels;
  const std::size_t len = px.size();
  const std::size_t half = gauss.size() / 2;
  if (len <= half) return {};

  // Extend by `half` samples: wrap around for closed contours, point
  // reflection about the endpoints for open ones.
  const std::size_t ext_len = len + 2 * half;
  std::vector<double> xs(ext_len);
  std::vector<double> ys(ext_len);
  for (std::size_t i = 0; i < ext_len; ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(half);
    const auto n = static_cast<std::ptrdiff_t>(len);
    if (k >= 0 && k < n) {
      xs[i] = px[static_cast<std::size_t>(k)].x;
      ys[i] = px[static_cast<std::size_t>(k)].y;
    } else if (contour.closed) {
      const auto& p = px[static_cast<std::size_t>(((k % n) + n) % n)];
      xs[i] = p.x;
      ys[i] = p.y;
    } else if (k < 0) {
      const auto& ref = px[static_cast<std::size_t>(-k)];
      xs[i] = 2.0 * px[0].x - ref.x;
      ys[i] = 2.0 * px[0].y - ref.y;
    } else {
      const auto& ref = px[static_cast<std::size_t>(2 * (n - 1) - k)];
      xs[i] = 2.0 * px[len - 1].x - ref.x;
      ys[i] = 2.0 * px[len - 1].y - ref.y;
    }
  }

  // Same-size convolution with zero padding outside the extended range.
  std::vector<double> sx(ext_len, 0.0);
  std::vector<double> sy(ext_len, 0.0);
  for (std::size_t i = 0; i < ext_len; ++i) {
    for (std::size_t k = 0; k < gauss.size(); ++k) {
      const auto j = static_cast<std::ptrdiff_t>(i + k) - static_cast<std::ptrdiff_t>(half);
      if (j < 0 || j >= static_cast<std::ptrdiff_t>(ext_len)) continue;
      sx[i] += gauss[k] * xs[static_cast<std::size_t>(j)];
      sy[i] += gauss[k] * ys[static_cast<std::size_t>(j)];
    }
  }

  const auto xu = central_difference(sx);
  const auto yu = central_difference(sy);
  const auto xuu = central_difference(xu);
  const auto yuu = central_difference(yu);
  std::vector<double> kappa(ext_len);
  for (std::size_t i = 0; i < ext_len; ++i) {
    const double speed = xu[i] * xu[i] + yu[i] * yu[i];
    const double k = speed > 0 ? std::abs((xu[i] * yuu[i] - xuu[i] * yu[i]) / std::pow(speed, 1.5)) : 0.0;
    kappa[i] = std::ceil(k * 100.0) / 100.0;
  }

  // Alternating minima (even slots) and maxima (odd slots).
  std::vector<std::size_t> extrema;
  int search = 1;
  for (std::size_t j = 0; j + 1 < ext_len; ++j) {
    if ((kappa[j + 1] - kappa[j]) * search > 0) {
      extrema.push_back(j);
      search = -search;
    }
  }
  if (extrema.size() % 2 == 0) extrema.push_back(ext_len - 1);

  std::vector<std::size_t> candidates;
  for (std::size_t j = 1; j + 1 < extrema.size(); j += 2) {
    const std::size_t peak = extrema[j];
    std::size_t left = peak;
    for (std::size_t i = peak + 1; i-- > extrema[j - 1];) {
      if (kappa[i] < kappa[left]) left = i;
    }
    std::size_t right = peak;
    for (std::size_t i = peak; i <= extrema[j + 1]; ++i) {
      if (kappa[i] < kappa[right]) right = i;
    }
    const double mean = std::accumulate(kappa.begin() + static_cast<std::ptrdiff_t>(left),
                                        kappa.begin() + static_cast<std::ptrdiff_t>(right) + 1, 0.0) /
                        static_cast<double>(right - left + 1);
    if (kappa[peak] >= params.threshold_ratio * mean) candidates.push_back(peak);
  }

  std::vector<Point> smooth(ext_len);
  for (std::size_t i = 0; i < ext_len; ++i) smooth[i] = {sx[i], sy[i]};
  const double max_angle = params.max_angle_deg;
  bool removed = true;
  while (removed && !candidates.empty()) {
    removed = false;
    std::vector<std::size_t> kept;
    const std::size_t n = candidates.size();
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t first = j == 0 ? 0 : candidates[j - 1];
      const std::size_t last = j + 1 == n ? ext_len - 1 : candidates[j + 1];
      const double ang = corner_angle(smooth, first, last, candidates[j]);
      if (ang > max_angle && ang < 360.0 - max_angle) {
        removed = true;
      } else {
        kept.push_back(candidates[j]);
      }
    }
    candidates = std::move(kept);
  }

  std::vector<std::size_t> corners;
  for (auto c : candidates) {
    if (c >= half && c < half + len) corners.push_back(c - half);
  }
  // On a closed contour a corner at the seam shows up at both ends.
  if (contour.closed && corners.size() > 1 && corners.front() + len - corners.back() <= kSeamTolerance) corners.pop_back();
  return corners;
}

}  // namespace

void CssParams::validate() const {
  const auto fail = [](const char* msg) { throw Error(ErrorCode::InvalidDetectorParameters, msg); };
  if (!(sigma > 0.0 && sigma <= 10.0)) fail("CSS sigma must be in (0, 10]");
  if (!(threshold_ratio >= 1.0)) fail("CSS threshold ratio must be >= 1");
  if (!(max_angle_deg > 90.0 && max_angle_deg < 180.0)) fail("CSS corner angle must be in (90, 180)");
  if (max_gap < 0 || max_gap > 5) fail("CSS gap must be 0..5 pixels");
  if (!(min_length_fraction >= 0.0 && min_length_fraction < 1.0)) fail("CSS minimum length fraction must be in [0, 1)");
}

EdgeMap thin_edges(const EdgeMap& edges) { return zhang_suen(edges); }

CornerMap detect_corners(const GrayImage& img, const EdgeMap& edges, const CssParams& params) {
  params.validate();
  if (edges.width() != img.width() || edges.height() != img.height()) {
    throw Error(ErrorCode::GeometryMismatch, "edge map does not match the image size");
  }
  CornerMap out{img.width(), img.height(), {}};
  const auto gauss = gaussian_kernel(params.sigma);
  const double min_length = (img.width() + img.height()) * params.min_length_fraction;
  const auto contours = extract_contours(prune_spurs(thin_edges(edges), kMaxSpurLength), params.max_gap, min_length);
  for (const auto& contour : contours) {
    for (auto idx : contour_corners(contour, gauss, params)) out.points.push_back(contour.pixels[idx]);
  }
  if (params.include_endpoints) {
    const std::vector<CornerPoint> curvature_corners = out.points;
    const auto far_from_corners = [&](const CornerPoint& p) {
      return std::all_of(curvature_corners.begin(), curvature_corners.end(), [&](const CornerPoint& c) {
        return (c.x - p.x) * (c.x - p.x) + (c.y - p.y) * (c.y - p.y) > 25;
      });
    };
    for (const auto& contour : contours) {
      if (contour.closed) continue;
      if (far_from_corners(contour.pixels.front())) out.points.push_back(contour.pixels.front());
      if (far_from_corners(contour.pixels.back())) out.points.push_back(contour.pixels.back());
    }
  }
  return out;
}

}  // namespace dseqmark
