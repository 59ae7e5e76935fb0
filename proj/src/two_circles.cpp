#include "ordertypes/two_circles.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "ordertypes/models.hpp"

namespace ordertypes {

namespace {

double wrap(double a) {
  while (a <= -std::numbers::pi) a += 2 * std::numbers::pi;
  while (a > std::numbers::pi) a -= 2 * std::numbers::pi;
  return a;
}

// Angular window [lo, hi] under which the interior hull K is seen from a
// point outside it, measured from a reference direction.
struct Window {
  double ref = 0;
  double lo = 0, hi = 0;
};

TwoCirclesTrial limit_trial(int n, const Rational& inner_share, Rng& rng) {
  PointSet outer;
  int inner = 0;
  for (int i = 0; i < n; ++i) {
    if (ratio(static_cast<long>(rng.next_u64() >> 11), 1L << 53) < inner_share) {
      rng.uniform();  // keep the draw count aligned with the finite-t sampler
      ++inner;
    } else {
      outer.push_back(random_circle_point(rng, 1));
    }
  }
  TwoCirclesTrial trial;
  const auto hull = convex_hull_indices(outer);
  trial.hull = static_cast<int>(hull.size());
  trial.hull_fraction = static_cast<double>(trial.hull) / n;
  const int h = trial.hull;
  if (h < 3) return trial;
  const Point origin(0, 0);
  for (int i = 0; i < h; ++i) {
    const Point& a = outer[hull[i]];
    const Point& b = outer[hull[(i + 1) % h]];
    bool found = false;
    for (int j = 0; j < h && !found; ++j) {
      if (j == i || j == (i + 1) % h) continue;
      const Point& c = outer[hull[j]];
      found = inner == 0 || (orient(b, c, origin) > 0 && orient(c, a, origin) > 0 && orient(a, b, origin) > 0);
    }
    trial.covering_edges += found ? 1 : 0;
  }
  return trial;
}

}  // namespace

int covering_edges(const PointSet& pts, const std::vector<int>& hull) {
  const int h = static_cast<int>(hull.size());
  if (h < 3) return 0;
  std::vector<char> on_hull(pts.size(), 0);
  for (int v : hull) on_hull[v] = 1;
  PointSet interior;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!on_hull[i]) interior.push_back(pts[i]);
  }
  if (interior.empty()) return h;
  const PointSet k = interior.size() <= 2 ? interior : convex_hull(interior);
  std::vector<double> kx, ky;
  double cx = 0, cy = 0;
  for (const auto& p : k) {
    kx.push_back(p.x.get_d());
    ky.push_back(p.y.get_d());
    cx += kx.back();
    cy += ky.back();
  }
  cx /= static_cast<double>(k.size());
  cy /= static_cast<double>(k.size());
  std::vector<double> hx(h), hy(h);
  std::vector<Window> win(h);
  for (int i = 0; i < h; ++i) {
    hx[i] = pts[hull[i]].x.get_d();
    hy[i] = pts[hull[i]].y.get_d();
    Window& w = win[i];
    w.ref = std::atan2(cy - hy[i], cx - hx[i]);
    w.lo = std::numeric_limits<double>::infinity();
    w.hi = -w.lo;
    for (std::size_t j = 0; j < k.size(); ++j) {
      const double a = wrap(std::atan2(ky[j] - hy[i], kx[j] - hx[i]) - w.ref);
      w.lo = std::min(w.lo, a);
      w.hi = std::max(w.hi, a);
    }
  }
  // K strictly left of the directed line from hull[i] to hull[j]
  const auto left_of = [&](int i, int j) {
    const double dir = wrap(std::atan2(hy[j] - hy[i], hx[j] - hx[i]) - win[i].ref);
    const double lo = wrap(win[i].lo - dir);
    return lo > 0 && lo + (win[i].hi - win[i].lo) < std::numbers::pi;
  };
  int count = 0;
  for (int i = 0; i < h; ++i) {
    const int b = (i + 1) % h;
    bool found = false;
    for (int c = 0; c < h && !found; ++c) {
      if (c == i || c == b) continue;
      found = left_of(b, c) && left_of(c, i);
    }
    count += found ? 1 : 0;
  }
  return count;
}

int TwoCirclesReport::in_band(double lo, double hi) const {
  return static_cast<int>(std::count_if(trials.begin(), trials.end(), [&](const TwoCirclesTrial& t) {
    return lo <= t.hull_fraction && t.hull_fraction <= hi;
  }));
}

double TwoCirclesReport::median_covering() const {
  std::vector<int> v;
  for (const auto& t : trials) v.push_back(t.covering_edges);
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}

std::string TwoCirclesReport::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["t"] = to_string(t);
  j["seed"] = seed;
  j["trials"] = trials.size();
  nlohmann::json fractions = nlohmann::json::array(), covering = nlohmann::json::array();
  for (const auto& tr : trials) {
    fractions.push_back(tr.hull_fraction);
    covering.push_back(tr.covering_edges);
  }
  j["hull_fraction"] = fractions;
  j["covering_edges"] = covering;
  j["in_band_049_051"] = in_band(0.49, 0.51);
  j["median_covering_edges"] = median_covering();
  return j.dump();
}

TwoCirclesReport two_circles_experiment(int n, const Rational& t, int trials, std::uint64_t seed,
                                        const Rational& inner_share, int threads) {
  if (n < 3) throw std::invalid_argument("two-circles experiment needs n >= 3");
  if (t < 0 || t >= 1) throw std::invalid_argument("t must lie in [0,1)");
  TwoCirclesReport report;
  report.n = n;
  report.t = t;
  report.seed = seed;
  report.trials.resize(trials);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    try {
      for (int i = next++; i < trials; i = next++) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        if (t == 0) {
          report.trials[i] = limit_trial(n, inner_share, rng);
          continue;
        }
        const auto pts = sample_points(TwoCircles{t, inner_share}, n, rng);
        TwoCirclesTrial trial;
        const auto hull = convex_hull_indices(pts);
        trial.hull = static_cast<int>(hull.size());
        trial.hull_fraction = static_cast<double>(trial.hull) / n;
        trial.covering_edges = covering_edges(pts, hull);
        report.trials[i] = trial;
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < std::max(1, threads); ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return report;
}

}  // namespace ordertypes
