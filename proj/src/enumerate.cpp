#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "ordertypes/store.hpp"

namespace ordertypes {

namespace {

struct Line {
  int i, j;
  Rational dx, dy;  // direction p_j - p_i
  // A x + B y + C = orientation determinant of (p_i, p_j, (x, y))
  Rational A, B, C;
};

std::vector<Line> lines_of(const PointSet& base) {
  std::vector<Line> lines;
  const int n = static_cast<int>(base.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Line l{i, j, base[j].x - base[i].x, base[j].y - base[i].y, 0, 0, 0};
      l.A = -l.dy;
      l.B = l.dx;
      l.C = l.dy * base[i].x - l.dx * base[i].y;
      lines.push_back(std::move(l));
    }
  }
  if (lines.size() > 64) throw std::invalid_argument("too many points for a 64-bit cell key");
  return lines;
}

Rational value(const Line& l, const Rational& x, const Rational& y) { return l.A * x + l.B * y + l.C; }

// Intersection of two non-parallel lines.
Point meet(const Line& a, const Line& b) {
  const Rational det = a.A * b.B - a.B * b.A;
  return {(a.B * b.C - a.C * b.B) / det, (a.C * b.A - a.A * b.C) / det};
}

bool parallel(const Line& a, const Line& b) { return a.A * b.B == a.B * b.A; }

Rational simpler_round(const Rational& v, int bits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  Rational shifted = v * scale + Rational(1, 2);
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  Rational r(q, scale);
  r.canonicalize();
  return r;
}

std::vector<std::pair<std::uint64_t, Point>> slab_cells(const PointSet& base, const std::vector<Line>& lines) {
  std::vector<Rational> breaks;
  for (std::size_t a = 0; a < lines.size(); ++a) {
    if (lines[a].dx == 0) breaks.push_back(base[lines[a].i].x);
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      if (!parallel(lines[a], lines[b])) breaks.push_back(meet(lines[a], lines[b]).x);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<Rational> midlines;
  if (breaks.empty()) {
    midlines.emplace_back(0);
  } else {
    midlines.push_back(breaks.front() - 1);
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) midlines.push_back((breaks[k] + breaks[k + 1]) / 2);
    midlines.push_back(breaks.back() + 1);
  }

  std::vector<std::pair<std::uint64_t, Point>> cells;
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::pair<Rational, int>> heights;
  for (const auto& xm : midlines) {
    heights.clear();
    std::uint64_t key = 0;
    for (std::size_t a = 0; a < lines.size(); ++a) {
      const auto& l = lines[a];
      if (l.dx == 0) {
        if (sgn(value(l, xm, 0)) > 0) key |= std::uint64_t{1} << a;
      } else {
        heights.emplace_back(base[l.i].y + l.dy / l.dx * (xm - base[l.i].x), static_cast<int>(a));
        // below the line: sign of the determinant is -sign(dx)
        if (sgn(l.dx) < 0) key |= std::uint64_t{1} << a;
      }
    }
    std::sort(heights.begin(), heights.end());
    for (std::size_t k = 0; k <= heights.size(); ++k) {
      if (k > 0) key ^= std::uint64_t{1} << heights[k - 1].second;
      if (!seen.insert(key).second) continue;
      Rational y;
      if (heights.empty()) y = 0;
      else if (k == 0) y = heights.front().first - 1;
      else if (k == heights.size()) y = heights.back().first + 1;
      else y = (heights[k - 1].first + heights[k].first) / 2;
      cells.emplace_back(key, Point(xm, y));
    }
  }
  return cells;
}

// Ray comparator: counter-clockwise angle from the positive x axis.
bool ray_before(const Point& u, const Point& v) {
  const auto half = [](const Point& w) { return (w.y > 0 || (w.y == 0 && w.x > 0)) ? 0 : 1; };
  const int hu = half(u), hv = half(v);
  if (hu != hv) return hu < hv;
  return u.x * v.y - u.y * v.x > 0;
}

std::vector<std::pair<std::uint64_t, Point>> vertex_cells(const PointSet& base, const std::vector<Line>& lines) {
  std::vector<Point> vertices;
  for (std::size_t a = 0; a < lines.size(); ++a) {
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      if (!parallel(lines[a], lines[b])) vertices.push_back(meet(lines[a], lines[b]));
    }
  }
  std::sort(vertices.begin(), vertices.end(), [](const Point& p, const Point& q) {
    const int c = cmp(p.x, q.x);
    return c != 0 ? c < 0 : p.y < q.y;
  });
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

  std::vector<std::pair<std::uint64_t, Point>> cells;
  std::unordered_set<std::uint64_t> seen;
  for (const auto& v : vertices) {
    std::vector<Point> rays;
    Rational eps = -1;
    for (const auto& l : lines) {
      const Rational val = value(l, v.x, v.y);
      if (val == 0) {
        const Rational norm = abs(l.dx) + abs(l.dy);
        rays.emplace_back(l.dx / norm, l.dy / norm);
        rays.emplace_back(-l.dx / norm, -l.dy / norm);
      } else {
        const Rational room = abs(val) / (4 * std::max(abs(l.A), abs(l.B)));
        if (eps < 0 || room < eps) eps = room;
      }
    }
    if (eps < 0) eps = 1;
    std::sort(rays.begin(), rays.end(), ray_before);
    for (std::size_t t = 0; t < rays.size(); ++t) {
      const auto& r = rays[t];
      const auto& s = rays[(t + 1) % rays.size()];
      Point q(v.x + eps * (r.x + s.x), v.y + eps * (r.y + s.y));
      auto key = cell_key(base, q);
      if (!key) throw std::logic_error("sector sample landed on a line");
      if (seen.insert(*key).second) cells.emplace_back(*key, std::move(q));
    }
  }
  return cells;
}

Point snap_into_cell(const PointSet& base, std::uint64_t key, const Point& q) {
  for (int bits = 0; bits <= 64; ++bits) {
    Point c(simpler_round(q.x, bits), simpler_round(q.y, bits));
    if (cell_key(base, c) == key) return c;
  }
  return q;
}

}  // namespace

std::optional<std::uint64_t> cell_key(const PointSet& base, const Point& q) {
  std::uint64_t key = 0;
  int bit = 0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t j = i + 1; j < base.size(); ++j, ++bit) {
      const int s = orient(base[i], base[j], q);
      if (s == 0) return std::nullopt;
      if (s > 0) key |= std::uint64_t{1} << bit;
    }
  }
  return key;
}

std::vector<std::pair<std::uint64_t, Point>> arrangement_cells(const PointSet& base, SamplingStrategy strategy) {
  if (base.size() < 2) throw std::invalid_argument("arrangement needs at least two points");
  const auto lines = lines_of(base);
  if (strategy == SamplingStrategy::VertexSectors && base.size() >= 3) return vertex_cells(base, lines);
  return slab_cells(base, lines);
}

void enumerate_next(OrderTypeStore& store, const EnumerateOptions& options) {
  const int parent_size = store.max_size();
  if (parent_size < 3) throw std::invalid_argument("base store must reach size 3");
  const auto& parents = store.records(parent_size);

  using Found = std::vector<OrderTypeRecord>;
  std::vector<Found> found(parents.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t p = next++; p < parents.size(); p = next++) {
      const auto& base = parents[p].witness;
      std::unordered_set<CanonicalCode, CodeHash> local;
      for (auto& [key, q] : arrangement_cells(base, options.strategy)) {
        PointSet w = base;
        w.push_back(options.snap ? snap_into_cell(base, key, q) : q);
        auto code = canonical_code(Chirotope::of(w));
        if (local.insert(code).second) found[p].push_back({std::move(code), std::move(w)});
      }
    }
  };
  const int threads = std::max(1, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // First discovery in (parent, cell) order wins, independent of scheduling.
  std::unordered_map<CanonicalCode, std::size_t, CodeHash> index;
  std::vector<OrderTypeRecord> level;
  for (auto& list : found) {
    for (auto& rec : list) {
      if (index.emplace(rec.code, level.size()).second) level.push_back(std::move(rec));
    }
  }
  store.append_level(std::move(level));
}

OrderTypeStore enumerate_up_to(int max_size, const EnumerateOptions& options) {
  auto store = OrderTypeStore::base();
  store.truncate(max_size);
  while (store.max_size() < max_size) enumerate_next(store, options);
  return store;
}

}  // namespace ordertypes
