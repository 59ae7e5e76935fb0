#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "ordertypes/sdp.hpp"
#include "support.hpp"

using namespace ordertypes;
using testing::alg;
using testing::code;
using testing::db;
using testing::q;

namespace {

Rational min_density(const CanonicalCode& small, int n) {
  Rational best = 2;
  for (const auto& r : db().records(n)) best = std::min(best, alg().density(small, r.code));
  return best;
}

SdpInstance c4_instance(int level, const std::vector<std::string>& roots) {
  std::vector<Chirotope> rs;
  for (const auto& r : roots) rs.push_back(resolve_root(db(), r));
  return build_instance(alg(), TargetSpec::density_of(alg(), code("convex-4"), level), rs);
}

// The square's contribution at omega through the algebra: average of the product of
// sum u_a a with itself, lifted to the instance level.
Rational oracle_square(const RootBlock& block, const std::vector<Rational>& u, const CanonicalCode& omega) {
  AlgebraElement c(block.flag_size, block.root);
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (u[a] != 0) c.add(block.basis[a], u[a]);
  }
  const auto sq = alg().average(alg().product(c, c));
  return alg().lift(sq, omega.size).coefficient(omega);
}

Certificate semidef_certificate(const SdpInstance& inst) {
  Certificate c;
  c.roots = {inst.blocks[0].root};
  std::vector<Rational> u;
  for (const auto& f : inst.blocks[0].basis) u.push_back(f.as_order_type() == code("convex-4") ? q(6, 25) : q(-11, 125));
  c.squares.push_back({0, 1, u});
  return c;
}

}  // namespace

TEST_CASE("flag size rule and parity") {
  CHECK(flag_size_for(8, 0) == 4);
  CHECK(flag_size_for(8, 2) == 5);
  CHECK(flag_size_for(8, 4) == 6);
  CHECK(flag_size_for(6, 2) == 4);
  CHECK_THROWS_AS(c4_instance(5, {"convex-6"}), ParityViolation);
}

TEST_CASE("flag vector lengths of the size-8 layout") {
  CHECK(alg().flags(resolve_root(db(), "empty"), flag_size_for(8, 0)).size() == 2);
  CHECK(alg().flags(resolve_root(db(), "size-2"), flag_size_for(8, 2)).size() == 44);
  CHECK(alg().flags(resolve_root(db(), "convex-4"), flag_size_for(8, 4)).size() == 468);
  CHECK(alg().flags(resolve_root(db(), "triangle-point"), flag_size_for(8, 4)).size() == 393);
  CHECK(root_preset(db(), "level8", 8).size() == 24);
}

TEST_CASE("zero certificate gives the plain minimum") {
  const auto inst5 = c4_instance(5, {"empty"});
  Certificate zero;
  zero.roots = {inst5.blocks[0].root};
  const auto v5 = verify_certificate(inst5, zero);
  CHECK(v5.best_bound == q(1, 5));
  zero.b = q(1, 5);
  CHECK(verify_certificate(inst5, zero).accepted);

  const auto inst6 = c4_instance(6, {"empty", "size-2"});
  Certificate zero6;
  zero6.roots = {inst6.blocks[0].root, inst6.blocks[1].root};
  CHECK(verify_certificate(inst6, zero6).best_bound == min_density(code("convex-4"), 6));
}

TEST_CASE("quadratic terms agree with the product-and-average oracle") {
  Rng rng(21);
  const auto inst = c4_instance(6, {"empty", "size-2"});
  for (std::size_t blk = 0; blk < inst.blocks.size(); ++blk) {
    const auto& block = inst.blocks[blk];
    Certificate c;
    c.roots = {inst.blocks[0].root, inst.blocks[1].root};
    std::vector<Rational> u;
    for (std::size_t a = 0; a < block.basis.size(); ++a) u.push_back(testing::random_rational(rng, 5));
    c.squares.push_back({static_cast<int>(blk), 1, u});
    const auto quad = certificate_quadratic(inst, c);
    for (std::size_t w = 0; w < inst.omegas.size(); ++w) CHECK(quad[w] == oracle_square(block, u, inst.omegas[w]));
  }
}

TEST_CASE("single-square certificate at size 8") {
  if (db().max_size() < 8) return;
  const auto inst = c4_instance(8, {"empty"});
  CHECK(inst.blocks[0].basis.size() == 2);
  auto cert = semidef_certificate(inst);
  cert.b = q(298819, 1093750);
  const auto v = verify_certificate(inst, cert);
  REQUIRE(v.accepted);
  CHECK(v.best_bound == q(298819, 1093750));
  CHECK(v.bound > q(2732, 10000));

  // independent evaluation: f - (6/25 c4 - 11/125 tp)^2 through split probabilities
  Rational best = 2;
  const auto c4 = code("convex-4"), tp = code("triangle-point");
  const Rational u4 = q(6, 25), ut = q(-11, 125);
  for (const auto& r : db().records(8)) {
    const Rational square = u4 * u4 * alg().split_probability(c4, c4, r.code) +
                            2 * u4 * ut * alg().split_probability(c4, tp, r.code) +
                            ut * ut * alg().split_probability(tp, tp, r.code);
    best = std::min(best, Rational(alg().density(c4, r.code) - square));
    // finite Cauchy-Schwarz: the square is a square up to the intersection term
    const Rational l1 = abs(u4) + abs(ut);
    CHECK(square >= -l1 * l1 * q(16, 8));
  }
  CHECK(best == q(298819, 1093750));

  auto bumped = cert;
  bumped.squares[0].u[0] += 1;
  const auto rejected = verify_certificate(inst, bumped);
  CHECK_FALSE(rejected.accepted);
  REQUIRE(rejected.violated.has_value());
  CHECK(*rejected.violated < inst.omegas.size());

  auto negative = cert;
  negative.squares[0].lambda = -1;
  CHECK_FALSE(verify_certificate(inst, negative).accepted);
}

TEST_CASE("minimum convex-quadrilateral density at size 8") {
  if (db().max_size() < 8) return;
  CHECK(min_density(code("convex-4"), 8) == q(19, 70));
}

TEST_CASE("SDPA emission") {
  const auto inst = c4_instance(6, {"empty", "size-2"});
  const auto text = sdpa_string(inst);
  CHECK(text == sdpa_string(c4_instance(6, {"empty", "size-2"})));
  std::istringstream in(text);
  const auto p = parse_sdpa(in);
  CHECK(p.constraints == static_cast<int>(inst.omegas.size()));
  CHECK(p.block_sizes.size() == inst.blocks.size() + 1);
  CHECK(p.block_sizes[0] == static_cast<int>(inst.blocks[0].basis.size()));
  CHECK(p.block_sizes[1] == static_cast<int>(inst.blocks[1].basis.size()));
  CHECK(p.block_sizes.back() < 0);
  for (std::size_t w = 0; w < inst.omegas.size(); ++w) {
    CHECK(p.c[w] == doctest::Approx(Rational(inst.f[w] + inst.shift).get_d()));
  }
}

TEST_CASE("solver, rounding and exact verification at size 6") {
  const auto inst = c4_instance(6, {"empty", "size-2"});
  const auto r = solve(inst);
  CHECK(r.converged);
  const auto rep = ingest_solution(inst, r.solution);
  const auto v = verify_certificate(inst, rep.certificate);
  REQUIRE(v.accepted);
  CHECK(v.bound.get_d() == doctest::Approx(r.b).epsilon(1e-6));
  CHECK(v.bound > min_density(code("convex-4"), 6));
  // the bound is asymptotic: it must stay below the best known limit construction (0.380473...)
  CHECK(v.bound < q(380473, 1000000));

  // certificate files survive a round trip
  const auto back = Certificate::from_json(rep.certificate.to_json());
  CHECK(verify_certificate(inst, back).bound == v.bound);

  // solver output survives its text format
  std::stringstream s;
  write_solution(r.solution, inst, s);
  const auto reread = parse_solution(s, inst);
  const auto v2 = verify_certificate(inst, ingest_solution(inst, reread).certificate);
  CHECK(v2.accepted);
  CHECK(v2.bound.get_d() == doctest::Approx(v.bound.get_d()).epsilon(1e-8));

  // an all-zero solution rounds to the zero certificate
  auto zero = r.solution;
  for (auto& x : zero.y) x = 0;
  for (auto& b : zero.x) std::fill(b.begin(), b.end(), 0.0);
  for (auto& b : zero.z) std::fill(b.begin(), b.end(), 0.0);
  const auto vz = verify_certificate(inst, ingest_solution(inst, zero).certificate);
  CHECK(vz.accepted);
  CHECK(vz.bound == min_density(code("convex-4"), 6));
}

TEST_CASE("adding a root never lowers the optimum") {
  const double alone = solve(c4_instance(6, {"empty"})).b;
  const double both = solve(c4_instance(6, {"empty", "size-2"})).b;
  CHECK(both >= alone - 1e-7);
}

TEST_CASE("refutation programs") {
  std::vector<CanonicalCode> six;
  for (const auto& r : db().records(6)) six.push_back(r.code);
  const auto roots = root_preset(db(), "default", 6);
  const auto at_least = feasibility_instance(alg(), 6, six, q(1, 20), Direction::AtLeast, roots);
  const auto at_most = feasibility_instance(alg(), 6, six, q(1, 20), Direction::AtMost, roots);
  REQUIRE(at_least.linear.size() == six.size());
  for (std::size_t j = 0; j < six.size(); ++j) {
    for (std::size_t w = 0; w < at_least.omegas.size(); ++w) CHECK(at_least.linear[j][w] == -at_most.linear[j][w]);
  }
  // uniform weights and no squares: every constraint is exactly tight, nothing is refuted
  Certificate empty;
  empty.roots = roots;
  empty.d.assign(six.size(), q(1, 20));
  const auto v = verify_certificate(at_least, empty);
  CHECK(v.best_bound == 0);
  CHECK_FALSE(v.accepted);
}
