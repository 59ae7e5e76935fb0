#include "ordertypes/geometry.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace ordertypes {

int orient(const Point& p, const Point& q, const Point& r) {
  thread_local Rational a, b, c, d;
  a = q.x - p.x;
  b = r.y - p.y;
  c = q.y - p.y;
  d = r.x - p.x;
  a *= b;
  c *= d;
  return cmp(a, c) > 0 ? 1 : (a == c ? 0 : -1);
}

bool general_position(std::span<const Point> points) {
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (points[i] == points[j]) return false;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (orient(points[i], points[j], points[k]) == 0) return false;
      }
    }
  }
  return true;
}

std::vector<int> convex_hull_indices(std::span<const Point> points) {
  const int n = static_cast<int>(points.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const int cx = cmp(points[a].x, points[b].x);
    return cx != 0 ? cx < 0 : points[a].y < points[b].y;
  });
  for (int i = 1; i < n; ++i) {
    if (points[order[i]] == points[order[i - 1]]) {
      throw DegenerateConfiguration("repeated point");
    }
  }
  if (n <= 2) return order;

  // Andrew's monotone chain with strict turns.
  std::vector<int> hull(2 * n);
  int k = 0;
  const auto push = [&](int idx, int floor) {
    while (k >= floor) {
      const int s = orient(points[hull[k - 2]], points[hull[k - 1]], points[idx]);
      if (s == 0) throw DegenerateConfiguration("aligned triple on the hull");
      if (s > 0) break;
      --k;
    }
    hull[k++] = idx;
  };
  for (int i = 0; i < n; ++i) push(order[i], 2);
  const int lower = k + 1;
  for (int i = n - 2; i >= 0; --i) push(order[i], lower);
  hull.resize(k - 1);
  return hull;
}

PointSet convex_hull(std::span<const Point> points) {
  PointSet out;
  for (int idx : convex_hull_indices(points)) out.push_back(points[idx]);
  return out;
}

bool convex_position(std::span<const Point> points) {
  return convex_hull_indices(points).size() == points.size();
}

int peeling_depth(std::span<const Point> points) {
  PointSet layer(points.begin(), points.end());
  int depth = 0;
  while (!layer.empty()) {
    ++depth;
    auto hull = convex_hull_indices(layer);
    std::vector<char> on_hull(layer.size(), 0);
    for (int idx : hull) on_hull[idx] = 1;
    PointSet next;
    for (std::size_t i = 0; i < layer.size(); ++i) {
      if (!on_hull[i]) next.push_back(std::move(layer[i]));
    }
    layer = std::move(next);
  }
  return depth;
}

void write_point_set(std::ostream& out, std::span<const Point> points) {
  out << "OTPS v1 n=" << points.size() << '\n';
  for (const auto& p : points) {
    out << to_string(p.x) << ' ' << to_string(p.y) << '\n';
  }
}

PointSet read_point_set(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty point set stream");
  std::istringstream hs(header);
  std::string magic, version, count;
  hs >> magic >> version >> count;
  if (magic != "OTPS" || version != "v1" || count.rfind("n=", 0) != 0) {
    throw std::runtime_error("bad point set header: '" + header + "'");
  }
  const long n = std::stol(count.substr(2));
  if (n < 0) throw std::runtime_error("negative point count");
  PointSet points;
  points.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    std::string xs, ys;
    if (!(in >> xs >> ys)) throw std::runtime_error("truncated point set");
    points.emplace_back(parse_rational(xs), parse_rational(ys));
  }
  return points;
}

}  // namespace ordertypes
