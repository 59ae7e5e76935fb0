#include "ordertypes/models.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

#include "ordertypes/aliases.hpp"

namespace ordertypes {

namespace {

constexpr int kRetryCap = 10000;
constexpr int kCircleBits = 40;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Rational uniform_dyadic(Rng& rng) {
  return ratio(Integer(static_cast<unsigned long>(rng.next_u64() >> 11)), Integer(1) << 53);
}

// Exact check for small sets; for large ones, only pairs whose directions
// from a common point nearly coincide in floating point are checked exactly.
bool general_position_fast(const PointSet& pts) {
  const std::size_t n = pts.size();
  if (n <= 64) return general_position(pts);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = pts[i].x.get_d();
    y[i] = pts[i].y.get_d();
  }
  std::vector<std::pair<double, std::size_t>> dirs;
  dirs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    dirs.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double a = std::atan2(y[j] - y[i], x[j] - x[i]);
      if (a < 0) a += std::numbers::pi;
      if (a >= std::numbers::pi) a -= std::numbers::pi;
      dirs.emplace_back(a, j);
    }
    std::sort(dirs.begin(), dirs.end());
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const auto& cur = dirs[k];
      const auto& next = dirs[(k + 1) % dirs.size()];
      double gap = next.first - cur.first;
      if (k + 1 == dirs.size()) gap += std::numbers::pi;
      if (gap < 1e-9 && (pts[cur.second] == pts[next.second] || orient(pts[i], pts[cur.second], pts[next.second]) == 0)) {
        return false;
      }
    }
  }
  return true;
}

Point polygon_point(const UniformConvexPolygon& poly, Rng& rng) {
  const auto& v = poly.vertices;
  if (v.size() < 3) throw std::invalid_argument("polygon needs at least three vertices");
  std::vector<double> cumulative;
  double total = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Rational area = (v[i].x - v[0].x) * (v[i + 1].y - v[0].y) - (v[i].y - v[0].y) * (v[i + 1].x - v[0].x);
    total += std::abs(area.get_d());
    cumulative.push_back(total);
  }
  const double pick = rng.uniform() * total;
  std::size_t t = std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin();
  t = std::min(t, cumulative.size() - 1);
  Rational r1 = uniform_dyadic(rng), r2 = uniform_dyadic(rng);
  if (r1 + r2 > 1) {
    r1 = 1 - r1;
    r2 = 1 - r2;
  }
  const Point& a = v[0];
  const Point& b = v[t + 1];
  const Point& c = v[t + 2];
  return {a.x + r1 * (b.x - a.x) + r2 * (c.x - a.x), a.y + r1 * (b.y - a.y) + r2 * (c.y - a.y)};
}

Point cantor_point(const CantorRect& m, Rng& rng) {
  // phi_{i_1} o ... o phi_{i_L}: coordinate x -> a^L x + (1-a) sum a^{j-1} i_j
  Rational cx = 0, cy = 0, ax = 1, ay = 1;
  for (int j = 0; j < m.depth; ++j) {
    if (rng.coin()) {
      cx += ax * (1 - m.a);
      cy += ay * (1 - m.b);
    }
    ax *= m.a;
    ay *= m.b;
  }
  return {cx / (1 - ax), cy / (1 - ay)};
}

// Same point up to a positive scaling of each axis, which leaves every
// orientation unchanged: a = p/q gives x ~ sum_j i_j p^(j-1) q^(L-j).
struct CantorTerms {
  std::vector<Integer> x, y;
  explicit CantorTerms(const CantorRect& m) {
    const auto terms = [&](const Rational& a) {
      std::vector<Integer> t(m.depth);
      Integer p = 1;
      for (int j = 0; j < m.depth; ++j) {
        Integer q = 1;
        mpz_pow_ui(q.get_mpz_t(), a.get_den().get_mpz_t(), m.depth - 1 - j);
        t[j] = p * q;
        p *= a.get_num();
      }
      return t;
    };
    x = terms(m.a);
    y = terms(m.b);
  }
};

Chirotope cantor_chirotope(const CantorRect& m, int n, Rng& rng) {
  const CantorTerms terms(m);
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    PointSet pts(n);
    for (auto& pt : pts) {
      Integer x = 0, y = 0;
      for (int j = 0; j < m.depth; ++j) {
        if (rng.coin()) {
          x += terms.x[j];
          y += terms.y[j];
        }
      }
      pt = {Rational(x), Rational(y)};
    }
    if (general_position_fast(pts)) return Chirotope::of(pts);
  }
  throw SamplingFailure(model_name(m) + ": retry cap reached");
}

Point draw_point(const MeasureModel& model, Rng& rng) {
  return std::visit(overloaded{
                        [&](const TwoCircles& m) -> Point {
                          const bool inner = uniform_dyadic(rng) < m.inner_share;
                          return random_circle_point(rng, inner ? m.t : Rational(1));
                        },
                        [&](const CantorRect& m) -> Point { return cantor_point(m, rng); },
                        [&](const UniformConvexPolygon& m) -> Point { return polygon_point(m, rng); },
                        [&](const auto&) -> Point { throw std::invalid_argument("model has no planar sampler"); },
                    },
                    model);
}

// Circle point in homogeneous integer coordinates (x : y : w), w > 0.
struct HPoint {
  Integer x, y, w;
};

HPoint random_circle_hpoint(Rng& rng) {
  const double theta = 2 * std::numbers::pi * rng.uniform();
  const Rational s = dyadic_round(std::tan(theta / 2), kCircleBits);
  const Integer& p = s.get_num();
  const Integer& q = s.get_den();
  return {q * q - p * p, 2 * p * q, q * q + p * p};
}

// Orientation of three points at two scales: inner points sit at eps * d,
// outer points at d.  The determinant splits by powers of eps; the sign of
// the lowest nonzero one wins.
int two_scale_orient(const HPoint& p, bool pin, const HPoint& q, bool qin, const HPoint& r, bool rin) {
  Integer by_order[3] = {0, 0, 0};
  by_order[int(qin) + int(rin)] += p.w * (q.x * r.y - q.y * r.x);
  by_order[int(rin) + int(pin)] += q.w * (r.x * p.y - r.y * p.x);
  by_order[int(pin) + int(qin)] += r.w * (p.x * q.y - p.y * q.x);
  for (const auto& c : by_order) {
    if (sgn(c) != 0) return sgn(c);
  }
  return 0;
}

Chirotope limit_chirotope(int n, Rng& rng) {
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    std::vector<HPoint> d(n);
    std::vector<char> inner(n);
    for (int i = 0; i < n; ++i) {
      inner[i] = rng.coin();
      d[i] = random_circle_hpoint(rng);
    }
    std::vector<int> signs;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = i + 1; j < n && ok; ++j) {
        for (int k = j + 1; k < n; ++k) {
          const int s = two_scale_orient(d[i], inner[i], d[j], inner[j], d[k], inner[k]);
          if (s == 0) {
            ok = false;
            break;
          }
          signs.push_back(s);
        }
      }
    }
    if (ok) return Chirotope::from_triples(n, signs);
  }
  throw SamplingFailure("two-circles-limit: retry cap reached");
}

Chirotope word_chirotope(int depth, int n, Rng& rng) {
  const auto words = sample_words(depth, n, rng);
  std::vector<int> signs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) signs.push_back(chi_E(words[i], words[j], words[k]));
    }
  }
  return Chirotope::from_triples(n, signs);
}

}  // namespace

bool CantorRect::flat() const { return b <= (1 - 2 * a) * (1 - 2 * b) * a; }

MeasureModel parse_model(std::string_view spec) {
  const auto parts = split(spec, ':');
  const auto name = parts[0];
  if (name == "two-circles") {
    TwoCircles m;
    if (parts.size() > 1) m.t = parse_rational(parts[1]);
    if (parts.size() > 2) m.inner_share = parse_rational(parts[2]);
    if (m.t <= 0 || m.t >= 1) throw std::invalid_argument("two-circles: t must lie in (0,1)");
    return m;
  }
  if (name == "two-circles-limit") return TwoCirclesLimit{};
  if (name == "cantor") {
    CantorRect m;
    if (parts.size() > 1) {
      const auto ab = split(parts[1], ',');
      if (ab.size() != 2) throw std::invalid_argument("cantor:a,b expected");
      m.a = parse_rational(ab[0]);
      m.b = parse_rational(ab[1]);
    }
    if (!(0 < m.b && m.b < m.a && 2 * m.a < 1)) throw std::invalid_argument("cantor: need 0 < b < a < 1/2");
    return m;
  }
  if (name == "square") return UniformConvexPolygon{{Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)}};
  if (name == "polygon") {
    if (parts.size() < 2) throw std::invalid_argument("polygon:<k> expected");
    return UniformConvexPolygon{convex_polygon(std::stoi(std::string(parts[1])))};
  }
  if (name == "words") {
    BinaryWords m;
    if (parts.size() > 1) m.depth = std::stoi(std::string(parts[1]));
    if (m.depth < 2 || m.depth > 64) throw std::invalid_argument("words: depth in [2,64]");
    return m;
  }
  throw std::invalid_argument("unknown model '" + std::string(spec) + "'");
}

std::string model_name(const MeasureModel& model) {
  return std::visit(overloaded{
                        [](const TwoCircles& m) {
                          return "two-circles:" + to_string(m.t) + ":" + to_string(m.inner_share);
                        },
                        [](const TwoCirclesLimit&) { return std::string("two-circles-limit"); },
                        [](const CantorRect& m) { return "cantor:" + to_string(m.a) + "," + to_string(m.b); },
                        [](const UniformConvexPolygon& m) { return "polygon:" + std::to_string(m.vertices.size()); },
                        [](const BinaryWords& m) { return "words:" + std::to_string(m.depth); },
                    },
                    model);
}

bool is_geometric(const MeasureModel& model) {
  return !std::holds_alternative<TwoCirclesLimit>(model) && !std::holds_alternative<BinaryWords>(model);
}

Point random_circle_point(Rng& rng, const Rational& radius) {
  const double theta = 2 * std::numbers::pi * rng.uniform();
  const Rational s = dyadic_round(std::tan(theta / 2), kCircleBits);
  const Rational den = 1 + s * s;
  return {radius * (1 - s * s) / den, radius * 2 * s / den};
}

PointSet sample_points(const MeasureModel& model, int n, Rng& rng) {
  if (n < 0) throw std::invalid_argument("sample size must be nonnegative");
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    PointSet pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) pts.push_back(draw_point(model, rng));
    if (general_position_fast(pts)) return pts;
  }
  throw SamplingFailure(model_name(model) + ": retry cap reached");
}

Chirotope sample_chirotope(const MeasureModel& model, int n, Rng& rng) {
  if (std::holds_alternative<TwoCirclesLimit>(model)) return limit_chirotope(n, rng);
  if (const auto* w = std::get_if<BinaryWords>(&model)) return word_chirotope(w->depth, n, rng);
  if (const auto* c = std::get_if<CantorRect>(&model)) return cantor_chirotope(*c, n, rng);
  return Chirotope::of(sample_points(model, n, rng));
}

BinaryWord parse_word(std::string_view bits) {
  if (bits.empty() || bits.size() > 64) throw std::invalid_argument("word length must be in [1,64]");
  BinaryWord w;
  w.depth = static_cast<int>(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') throw std::invalid_argument("word must be binary");
    if (bits[i] == '1') w.bits |= std::uint64_t{1} << (63 - i);
  }
  return w;
}

std::vector<BinaryWord> sample_words(int depth, int n, Rng& rng) {
  const std::uint64_t mask = depth >= 64 ? ~std::uint64_t{0} : ~(~std::uint64_t{0} >> depth);
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    std::vector<BinaryWord> out(n);
    for (auto& w : out) w = {rng.next_u64() & mask, depth};
    std::vector<std::uint64_t> b;
    for (const auto& w : out) b.push_back(w.bits);
    std::sort(b.begin(), b.end());
    if (std::adjacent_find(b.begin(), b.end()) == b.end()) return out;
  }
  throw SamplingFailure("words: retry cap reached");
}

int common_prefix(const BinaryWord& u, const BinaryWord& v) {
  const int depth = std::min(u.depth, v.depth);
  return std::min(depth, std::countl_zero(u.bits ^ v.bits));
}

int chi_E(const BinaryWord& u, const BinaryWord& v, const BinaryWord& w) {
  const BinaryWord* s[3] = {&u, &v, &w};
  int parity = 1;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j + 1 < 3 - i; ++j) {
      if (s[j]->bits > s[j + 1]->bits) {
        std::swap(s[j], s[j + 1]);
        parity = -parity;
      }
    }
  }
  const int uv = common_prefix(*s[0], *s[1]);
  const int vw = common_prefix(*s[1], *s[2]);
  const int depth = std::min({u.depth, v.depth, w.depth});
  if (uv >= depth || vw >= depth) throw PrefixCollision("words share their whole prefix");
  return parity * (uv < vw ? 1 : -1);
}

std::string Estimate::to_json(const std::string& model, const std::string& omega) const {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["omega"] = omega;
  j["trials"] = trials;
  j["seed"] = seed;
  j["successes"] = successes;
  j["mean"] = mean;
  j["ci95"] = {lower, upper};
  return j.dump();
}

Estimate wilson(std::uint64_t successes, std::uint64_t trials, std::uint64_t seed) {
  Estimate e;
  e.successes = successes;
  e.trials = trials;
  e.seed = seed;
  if (trials == 0) {
    e.upper = 1;
    return e;
  }
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1 + z * z / n;
  const double center = (p + z * z / (2 * n)) / denom;
  const double hw = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  e.mean = p;
  e.lower = std::max(0.0, center - hw);
  e.upper = std::min(1.0, center + hw);
  return e;
}

Estimate bernoulli_estimate(std::uint64_t trials, std::uint64_t seed, const MonteCarloOptions& options,
                            const std::function<bool(Rng&)>& draw) {
  const std::uint64_t batch = std::max<std::uint64_t>(1, options.batch);
  const std::uint64_t batches = (trials + batch - 1) / batch;
  std::vector<std::uint64_t> hits(batches, 0);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    try {
      for (std::uint64_t i = next++; i < batches; i = next++) {
        Rng rng(seed, i);
        const std::uint64_t count = std::min(batch, trials - i * batch);
        std::uint64_t h = 0;
        for (std::uint64_t t = 0; t < count; ++t) h += draw(rng) ? 1 : 0;
        hits[i] = h;
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
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
  if (failure) std::rethrow_exception(failure);
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return wilson(total, trials, seed);
}

Estimate estimate_density(const MeasureModel& model, const CanonicalCode& omega, std::uint64_t trials,
                          std::uint64_t seed, const MonteCarloOptions& options) {
  const int n = omega.size;
  return bernoulli_estimate(trials, seed, options,
                            [&](Rng& rng) { return canonical_code(sample_chirotope(model, n, rng)) == omega; });
}

Rational exact_cup_probability(int s) {
  if (s < 3) throw std::invalid_argument("cup probability needs s >= 3");
  Rational f(1, 2);
  for (int i = 4; i <= s; ++i) f *= ratio(i, (Integer(1) << i) - 2);
  f.canonicalize();
  return f;
}

Estimate estimate_cup_probability(int s, std::uint64_t trials, std::uint64_t seed, int depth,
                                  const MonteCarloOptions& options) {
  if (s < 3) throw std::invalid_argument("cup probability needs s >= 3");
  return bernoulli_estimate(trials, seed, options, [&](Rng& rng) {
    auto words = sample_words(depth, s, rng);
    std::sort(words.begin(), words.end(), [](const BinaryWord& x, const BinaryWord& y) { return x.bits < y.bits; });
    for (int i = 0; i < s; ++i) {
      for (int j = i + 1; j < s; ++j) {
        for (int k = j + 1; k < s; ++k) {
          if (chi_E(words[i], words[j], words[k]) != 1) return false;
        }
      }
    }
    return true;
  });
}

Estimate kernel_distance_estimate(const MeasureModel& model, const Point& x, const Point& x2, std::uint64_t trials,
                                  std::uint64_t seed, const MonteCarloOptions& options) {
  if (!is_geometric(model)) throw std::invalid_argument("kernel distance needs a planar model");
  if (x == x2) return wilson(0, trials, seed);
  return bernoulli_estimate(trials, seed, options, [&](Rng& rng) {
    const Point y = draw_point(model, rng);
    const Point z = draw_point(model, rng);
    return orient(x, y, z) != orient(x2, y, z);
  });
}

CanonicalCode mirror(const CanonicalCode& code) {
  if (code.size < 3) return code;
  std::string signs = chirotope_of_code(code.size, code.bytes).sign_string();
  for (auto& c : signs) c = c == '+' ? '-' : '+';
  return canonical_code(Chirotope::from_sign_string(signs));
}

CrosscheckReport cantor_vs_words(const Rational& a, const Rational& b, const CanonicalCode& omega,
                                 std::uint64_t trials, std::uint64_t seed, const MonteCarloOptions& options) {
  CantorRect m{a, b};
  if (!(0 < b && b < a && 2 * a < 1)) throw ConditionViolated("need 0 < b < a < 1/2");
  if (!m.flat()) throw ConditionViolated("b <= (1-2a)(1-2b)a fails for a=" + to_string(a) + ", b=" + to_string(b));
  CrosscheckReport r;
  r.cantor = estimate_density(m, omega, trials, seed, options);
  r.words = estimate_density(BinaryWords{}, mirror(omega), trials, seed + 1, options);
  r.agree = std::abs(r.cantor.mean - r.words.mean) <= r.cantor.half_width() + r.words.half_width();
  return r;
}

}  // namespace ordertypes
