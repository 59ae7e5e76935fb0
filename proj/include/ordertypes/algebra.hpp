#pragma once

// Densities, split probabilities, sigma-flags and the flag algebra product,
// all exact.  Elements are kept in single-level normal form.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "ordertypes/chirotope.hpp"
#include "ordertypes/store.hpp"

namespace ordertypes {

/// Probability weights on the order types of one size.
struct LimitVector {
  int level = 0;
  std::map<CanonicalCode, Rational> weights;
};

/// Chirotope of a flag in its canonical labeling; labeled points come first.
Chirotope flag_chirotope(const FlagCode& flag);
/// The labeled part of a flag.
Chirotope flag_root(const FlagCode& flag);

/// Flag obtained from `big` by labeling `labels` (in order) and keeping the
/// points `others` unlabeled.
FlagCode labeled_flag(const Chirotope& big, std::span<const int> labels, std::span<const int> others);

/// Calls f(labels) for every injection of the root's points into `big` whose
/// image realizes `root` (labels[i] = image of root point i).
void for_each_embedding(const Chirotope& big, const Chirotope& root,
                        const std::function<void(const std::vector<int>&)>& f);

struct EmbeddingDistribution {
  struct Entry {
    FlagCode flag;
    std::int64_t multiplicity;
  };
  std::vector<Entry> flags;  // sorted by flag code
  std::int64_t admissible = 0;  // injections realizing the root
  std::int64_t injections = 0;  // all injections of the root's points

  /// p_tau^sigma: multiplicity over all injections.
  Rational probability(const FlagCode& flag) const;
};

class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(int level, Chirotope root = {});

  static AlgebraElement of(const CanonicalCode& code, const Rational& coeff = 1);
  /// Rooted element supported on one flag; the root is read off the flag.
  static AlgebraElement of(const FlagCode& flag, const Rational& coeff = 1);

  int level() const { return level_; }
  const Chirotope& root() const { return root_; }
  bool rooted() const { return root_.size() > 0; }
  const std::map<FlagCode, Rational>& terms() const { return terms_; }

  Rational coefficient(const FlagCode& flag) const;
  Rational coefficient(const CanonicalCode& code) const { return coefficient(FlagCode::unlabeled(code)); }

  void add(const FlagCode& flag, const Rational& coeff);
  void add(const CanonicalCode& code, const Rational& coeff) { add(FlagCode::unlabeled(code), coeff); }

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(const Rational& c);
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(AlgebraElement a, const Rational& c) { return a *= c; }
  friend AlgebraElement operator*(const Rational& c, AlgebraElement a) { return a *= c; }
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.level_ == b.level_ && a.root_ == b.root_ && a.terms_ == b.terms_;
  }

  /// {"level": n, "root": {"size": k, "signs": "+-.."} (rooted only),
  ///  "terms": [{"code": hex, "num": "..", "den": ".."}]}
  std::string to_json() const;
  static AlgebraElement from_json(std::string_view text);

 private:
  void check_compatible(const AlgebraElement& other) const;

  int level_ = 0;
  Chirotope root_;
  std::map<FlagCode, Rational> terms_;
};

class SizeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RootMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Subset counts of every order type of size k inside every order type of
/// size m.
struct DensityTable {
  int k = 0, m = 0;
  std::size_t small_count = 0, big_count = 0;
  std::vector<std::uint32_t> counts;  // counts[big * small_count + small]
  std::int64_t denominator = 1;       // C(m, k)

  std::uint32_t count(std::size_t big, std::size_t small) const { return counts[big * small_count + small]; }
  Rational at(std::size_t big, std::size_t small) const { return ratio(count(big, small), denominator); }
};

/// For each big object, the nonzero (first index, second index, count)
/// triples over its ordered bipartitions.
struct SplitTable {
  struct Entry {
    std::uint32_t first, second, count;
  };
  std::vector<std::vector<Entry>> rows;
  std::int64_t denominator = 1;
};

/// Exact flag calculus over a store.  Tables are built lazily and memoized;
/// all methods are safe to call concurrently.
class FlagAlgebra {
 public:
  explicit FlagAlgebra(const OrderTypeStore& store);
  ~FlagAlgebra();

  const OrderTypeStore& store() const { return store_; }

  /// Chirotopes of all order types of size n, in store order and canonical labeling.
  const std::vector<Chirotope>& chirotopes(int n) const;

  const DensityTable& density_table(int k, int m) const;
  Rational density(const CanonicalCode& small, const CanonicalCode& big) const;
  /// Zero when |big| != |w1| + |w2|.
  Rational split_probability(const CanonicalCode& w1, const CanonicalCode& w2, const CanonicalCode& big) const;
  const SplitTable& split_table(int a, int b) const;

  /// All root-flags of the given size, sorted by code.
  const std::vector<FlagCode>& flags(const Chirotope& root, int size) const;
  std::size_t flag_index(const FlagCode& flag) const;

  Rational flag_density(const FlagCode& small, const FlagCode& big) const;
  Rational flag_split_probability(const FlagCode& t1, const FlagCode& t2, const FlagCode& big) const;

  EmbeddingDistribution embeddings(const Chirotope& root, const CanonicalCode& omega) const;

  AlgebraElement lift(const AlgebraElement& a, int level) const;
  AlgebraElement product(const AlgebraElement& a, const AlgebraElement& b) const;
  AlgebraElement average(const AlgebraElement& a) const;
  Rational evaluate(const AlgebraElement& a, const LimitVector& l) const;
  Rational evaluate(const AlgebraElement& a, const CanonicalCode& omega) const;
  /// Equality in the quotient algebra: compare after lifting to a common level.
  bool equivalent(const AlgebraElement& a, const AlgebraElement& b) const;

  /// Density table as CSV: header "big\small,0,1,..", one row per big index,
  /// cells "p/q".
  std::string density_csv(int k, int m) const;

 private:
  struct FlagTables;
  FlagTables& tables_for(const Chirotope& root) const;
  const DensityTable& flag_density_table(const Chirotope& root, int s, int m) const;
  const SplitTable& flag_split_table(const Chirotope& root, int a, int b) const;

  const OrderTypeStore& store_;
  mutable std::recursive_mutex mutex_;
  mutable std::map<int, std::vector<Chirotope>> chirotopes_;
  mutable std::map<std::pair<int, int>, DensityTable> densities_;
  mutable std::map<std::pair<int, int>, SplitTable> splits_;
  mutable std::map<std::string, std::unique_ptr<FlagTables>> flag_tables_;
};

}  // namespace ordertypes
