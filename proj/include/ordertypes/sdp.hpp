#pragma once

// Semidefinite programs for density lower bounds, their SDPA emission, and
// exact verification of rounded sum-of-squares certificates.
//
// For each omega of size N the instance encodes
//   f_omega - sum_j d_j g_j(omega) - sum_i <Q_i(omega), M_i> >= b
// with M_i PSD over the sigma_i-flag basis, d >= 0, sum d = 1 (only when
// linear terms are present) and b maximized.  Q_i(omega)(a,b) is the
// probability that a random labeling of sigma_i in omega followed by two
// random disjoint sets of unlabeled points yields the flags a and b.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ordertypes/algebra.hpp"

namespace ordertypes {

struct TargetSpec {
  int level = 0;
  std::vector<Rational> f;  // one coefficient per order type of size level, store order

  /// f_omega = p(small, omega).
  static TargetSpec density_of(const FlagAlgebra& algebra, const CanonicalCode& small, int level);
};

class ParityViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RootBlock {
  Chirotope root;
  int flag_size = 0;
  std::vector<FlagCode> basis;
  struct Entry {
    std::uint32_t a, b;      // a <= b
    std::uint64_t count;     // ordered occurrences of (a,b) plus (b,a)
  };
  /// q[omega] lists nonzero entries; Q(a,b) = Q(b,a) = count / (2 * denominator).
  std::vector<std::vector<Entry>> q;
  std::int64_t denominator = 1;

  Rational value(const Entry& e) const { return ratio(static_cast<long>(e.count), 2 * denominator); }
};

enum class InstanceKind { Bound, Refutation };

struct SdpInstance {
  InstanceKind kind = InstanceKind::Bound;
  int level = 0;
  std::vector<CanonicalCode> omegas;
  std::vector<Rational> f;
  std::vector<RootBlock> blocks;
  /// linear[j][omega] = g_j(omega).
  std::vector<std::vector<Rational>> linear;
  std::vector<CanonicalCode> linear_labels;
  /// f is shifted by this amount in the emitted program so that b' = b + shift >= 0.
  Rational shift = 0;
};

/// Flag size used for a root of size k at level N: floor((N + k) / 2).
int flag_size_for(int level, int root_size);

SdpInstance build_instance(const FlagAlgebra& algebra, const TargetSpec& target, const std::vector<Chirotope>& roots,
                           int threads = 1);

enum class Direction { AtLeast, AtMost };

/// Refutation program for "some limit has l(omega_j) >= c (or <= c) for every
/// listed omega_j": g_j = +-(p(omega_j, .) - c), f = 0.  A verified b > 0 refutes.
SdpInstance feasibility_instance(const FlagAlgebra& algebra, int level, const std::vector<CanonicalCode>& weights,
                                 const Rational& c, Direction direction, const std::vector<Chirotope>& roots,
                                 int threads = 1);

/// Sparse SDPA text.  Blocks: one per root, then a diagonal block holding
/// [s_omega..., b', d_j...].  Constraints in omega order, then sum d = 1.
void emit_sdpa(const SdpInstance& instance, std::ostream& out);
std::string sdpa_string(const SdpInstance& instance);

struct SdpaProblem {
  int constraints = 0;
  std::vector<int> block_sizes;  // negative for diagonal blocks
  std::vector<double> c;
  struct Entry {
    int matrix, block, i, j;
    double value;
  };
  std::vector<Entry> entries;
};
SdpaProblem parse_sdpa(std::istream& in);

/// Solver output in CSDP's format: the y vector on the first line, then
/// "matno block i j value" lines with matno 1 = Z and 2 = X.
struct SolverSolution {
  std::vector<double> y;
  /// Dense X blocks, row-major, same layout as the SDPA blocks (diagonal
  /// blocks are stored as their diagonal).
  std::vector<std::vector<double>> x;
  std::vector<std::vector<double>> z;
};
SolverSolution parse_solution(std::istream& in, const SdpInstance& instance);
void write_solution(const SolverSolution& solution, const SdpInstance& instance, std::ostream& out);

struct SolverOptions {
  int max_iterations = 200;
  double tolerance = 1e-9;
  bool verbose = false;
};

struct SolverResult {
  SolverSolution solution;
  double b = 0;  // unshifted
  int iterations = 0;
  bool converged = false;
};

/// Primal-dual interior point method (HKM direction, Mehrotra
/// predictor-corrector) on the instance with the M_i entries, b and d as
/// unknowns.  Suitable for instances with a few thousand unknowns.
SolverResult solve(const SdpInstance& instance, const SolverOptions& options = {});

struct Certificate {
  std::vector<Chirotope> roots;
  struct Square {
    int root = 0;
    Rational lambda;
    std::vector<Rational> u;
  };
  std::vector<Square> squares;
  std::vector<Rational> d;
  Rational b;
  /// Optional: flag basis per root as codes, checked against the rebuilt basis.
  std::vector<std::vector<FlagCode>> basis;

  std::string to_json() const;
  static Certificate from_json(std::string_view text);
};

struct IngestOptions {
  Integer denominator = Integer(1) << 64;
};

struct IngestReport {
  Certificate certificate;
  double solver_b = 0;
  std::vector<double> eigen_shift;  // per block, 0 when no shift was needed
  bool degraded = false;            // certified b below the solver's b by more than 1e-6
};

IngestReport ingest_solution(const SdpInstance& instance, const SolverSolution& solution,
                             const IngestOptions& options = {});

struct Verification {
  bool accepted = false;
  /// Exact min over omega of f - linear - quadratic terms.
  Rational best_bound;
  /// The certificate's claimed b when accepted.
  Rational bound;
  std::optional<std::size_t> violated;  // index into instance.omegas
  std::string reason;
};

/// Exact check.  The instance supplies omegas, f, g and the Q tables; the
/// certificate's roots must match the instance's roots.
Verification verify_certificate(const SdpInstance& instance, const Certificate& certificate);

/// Quadratic contribution sum_i <Q_i(omega), M_i> of a certificate, per omega.
std::vector<Rational> certificate_quadratic(const SdpInstance& instance, const Certificate& certificate);

}  // namespace ordertypes
