#pragma once

// Probability measures on the plane (and the binary-word chirotope) that
// induce limits of order types, with Monte Carlo density estimates.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ordertypes/chirotope.hpp"
#include "ordertypes/geometry.hpp"
#include "ordertypes/rng.hpp"

namespace ordertypes {

/// Uniform on two concentric circles of radii 1 and t, each of mass 1/2
/// (the inner share is adjustable; 0 puts everything on the outer circle).
struct TwoCircles {
  Rational t{1, 100};
  Rational inner_share{1, 2};
};

/// The t -> 0 limit of TwoCircles, as a two-scale chirotope rule.
struct TwoCirclesLimit {};

/// Self-similar measure on [0,1]^2 built from R_0 = [0,a]x[0,b] and
/// R_1 = [1-a,1]x[1-b,1].  Points are fixed points of phi_w for random
/// words w of length `depth`.
struct CantorRect {
  Rational a{1, 4};
  Rational b{1, 16};
  int depth = 48;

  /// b <= (1-2a)(1-2b)a, under which the induced limit is the word limit.
  bool flat() const;
};

struct UniformConvexPolygon {
  PointSet vertices;  // counter-clockwise, strictly convex
};

/// Coin-tossing words truncated to `depth` bits (depth <= 64).
struct BinaryWords {
  int depth = 64;
};

using MeasureModel = std::variant<TwoCircles, TwoCirclesLimit, CantorRect, UniformConvexPolygon, BinaryWords>;

/// "two-circles[:t]", "two-circles-limit", "cantor[:a,b]", "square",
/// "polygon:<k>" (regular-ish convex k-gon on a parabola), "words[:depth]".
MeasureModel parse_model(std::string_view spec);
std::string model_name(const MeasureModel& model);
bool is_geometric(const MeasureModel& model);

class SamplingFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rational point ((1-s^2)/(1+s^2), 2s/(1+s^2)) with s a dyadic
/// approximation of tan(theta/2), theta uniform.
Point random_circle_point(Rng& rng, const Rational& radius);

/// i.i.d. points in general position (rejection, capped).  Not defined for
/// TwoCirclesLimit and BinaryWords.
PointSet sample_points(const MeasureModel& model, int n, Rng& rng);

/// Chirotope of n i.i.d. draws; works for every model.
Chirotope sample_chirotope(const MeasureModel& model, int n, Rng& rng);

struct BinaryWord {
  std::uint64_t bits = 0;  // most significant `depth` bits are the word
  int depth = 64;
};

class PrefixCollision : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

BinaryWord parse_word(std::string_view bits);
std::vector<BinaryWord> sample_words(int depth, int n, Rng& rng);
int common_prefix(const BinaryWord& u, const BinaryWord& v);
/// +1 iff |u^v| < |v^w| once sorted lexicographically, adjusted by the
/// parity of the sorting permutation.
int chi_E(const BinaryWord& u, const BinaryWord& v, const BinaryWord& w);

struct Estimate {
  double mean = 0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double lower = 0;  // Wilson 95% interval
  double upper = 0;
  std::uint64_t seed = 0;

  double half_width() const { return (upper - lower) / 2; }
  bool covers(double value) const { return lower <= value && value <= upper; }
  std::string to_json(const std::string& model, const std::string& omega) const;
};

Estimate wilson(std::uint64_t successes, std::uint64_t trials, std::uint64_t seed = 0);

struct MonteCarloOptions {
  std::uint64_t batch = 1u << 14;
  int threads = 1;
};

/// Runs `trials` Bernoulli draws in batches; batch i uses Rng(seed, i).
Estimate bernoulli_estimate(std::uint64_t trials, std::uint64_t seed, const MonteCarloOptions& options,
                            const std::function<bool(Rng&)>& draw);

Estimate estimate_density(const MeasureModel& model, const CanonicalCode& omega, std::uint64_t trials,
                          std::uint64_t seed, const MonteCarloOptions& options = {});

/// prod_{i=4..s} i/(2^i - 2) * 1/2.
Rational exact_cup_probability(int s);
/// Probability that s random words, sorted, have every triple positive.
Estimate estimate_cup_probability(int s, std::uint64_t trials, std::uint64_t seed, int depth = 64,
                                  const MonteCarloOptions& options = {});

/// Disagreement probability q = P(orient(x,y,z) != orient(x',y,z)) for y, z
/// drawn from the model; the neighborhood distance is d = 2q.
Estimate kernel_distance_estimate(const MeasureModel& model, const Point& x, const Point& x2, std::uint64_t trials,
                                  std::uint64_t seed, const MonteCarloOptions& options = {});

struct CrosscheckReport {
  Estimate cantor;
  Estimate words;
  bool agree = false;  // overlapping 95% intervals
};

class ConditionViolated : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Compares the Cantor estimate of omega with the word estimate of its
/// mirror image (the rectangles realize chi_E with reversed orientation).
CrosscheckReport cantor_vs_words(const Rational& a, const Rational& b, const CanonicalCode& omega,
                                 std::uint64_t trials, std::uint64_t seed, const MonteCarloOptions& options = {});

/// Canonical code of the reflected order type.
CanonicalCode mirror(const CanonicalCode& code);

}  // namespace ordertypes
