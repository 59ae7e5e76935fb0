#include <algorithm>
#include <numeric>
#include <sstream>

#include "ordertypes/algebra.hpp"
#include "ordertypes/combinatorics.hpp"

namespace ordertypes {

Chirotope flag_chirotope(const FlagCode& flag) { return chirotope_of_code(flag.size, flag.bytes); }

Chirotope flag_root(const FlagCode& flag) {
  std::vector<int> labels(flag.labels);
  std::iota(labels.begin(), labels.end(), 0);
  return flag_chirotope(flag).restrict(labels);
}

FlagCode labeled_flag(const Chirotope& big, std::span<const int> labels, std::span<const int> others) {
  std::vector<int> order(labels.begin(), labels.end());
  order.insert(order.end(), others.begin(), others.end());
  return flag_code(big.restrict(order), static_cast<int>(labels.size()));
}

void for_each_embedding(const Chirotope& big, const Chirotope& root,
                        const std::function<void(const std::vector<int>&)>& f) {
  const int n = big.size();
  const int k = root.size();
  if (k > n) return;
  std::vector<int> labels(k);
  std::vector<char> used(n, 0);
  std::function<void(int)> extend = [&](int pos) {
    if (pos == k) {
      f(labels);
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (used[v]) continue;
      bool ok = true;
      for (int a = 0; a < pos && ok; ++a) {
        for (int b = a + 1; b < pos; ++b) {
          if (big(labels[a], labels[b], v) != root(a, b, pos)) {
            ok = false;
            break;
          }
        }
      }
      if (!ok) continue;
      labels[pos] = v;
      used[v] = 1;
      extend(pos + 1);
      used[v] = 0;
    }
  };
  extend(0);
}

Rational EmbeddingDistribution::probability(const FlagCode& flag) const {
  if (injections == 0) return 0;
  for (const auto& e : flags) {
    if (e.flag == flag) return ratio(e.multiplicity, injections);
  }
  return 0;
}

const std::vector<Chirotope>& FlagAlgebra::chirotopes(int n) const {
  std::lock_guard lock(mutex_);
  auto it = chirotopes_.find(n);
  if (it != chirotopes_.end()) return it->second;
  std::vector<Chirotope> out;
  for (const auto& r : store_.records(n)) out.push_back(chirotope_of_code(n, r.code.bytes));
  return chirotopes_.emplace(n, std::move(out)).first->second;
}

const DensityTable& FlagAlgebra::density_table(int k, int m) const {
  std::lock_guard lock(mutex_);
  auto it = densities_.find({k, m});
  if (it != densities_.end()) return it->second;
  if (k < 0 || k > m) throw SizeMismatch("density needs 0 <= |small| <= |big|");
  const auto& bigs = chirotopes(m);
  DensityTable t;
  t.k = k;
  t.m = m;
  t.small_count = store_.count(k);
  t.big_count = bigs.size();
  t.denominator = binomial(m, k);
  t.counts.assign(t.small_count * t.big_count, 0);
  for (std::size_t b = 0; b < bigs.size(); ++b) {
    for_each_subset(m, k, [&](const std::vector<int>& s) {
      const auto small = store_.index_of(canonical_code(bigs[b].restrict(s)));
      ++t.counts[b * t.small_count + small];
    });
  }
  return densities_.emplace(std::pair{k, m}, std::move(t)).first->second;
}

Rational FlagAlgebra::density(const CanonicalCode& small, const CanonicalCode& big) const {
  if (small.size > big.size) throw SizeMismatch("density needs |small| <= |big|");
  const auto s = store_.index_of(small);
  const auto b = store_.index_of(big);
  return density_table(small.size, big.size).at(b, s);
}

const SplitTable& FlagAlgebra::split_table(int a, int b) const {
  std::lock_guard lock(mutex_);
  auto it = splits_.find({a, b});
  if (it != splits_.end()) return it->second;
  const int n = a + b;
  const auto& bigs = chirotopes(n);
  SplitTable t;
  t.denominator = binomial(n, a);
  t.rows.resize(bigs.size());
  for (std::size_t w = 0; w < bigs.size(); ++w) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> counts;
    for_each_subset(n, a, [&](const std::vector<int>& s) {
      const auto rest = complement(n, s);
      const auto i = static_cast<std::uint32_t>(store_.index_of(canonical_code(bigs[w].restrict(s))));
      const auto j = static_cast<std::uint32_t>(store_.index_of(canonical_code(bigs[w].restrict(rest))));
      ++counts[{i, j}];
    });
    for (const auto& [ij, c] : counts) t.rows[w].push_back({ij.first, ij.second, c});
  }
  return splits_.emplace(std::pair{a, b}, std::move(t)).first->second;
}

Rational FlagAlgebra::split_probability(const CanonicalCode& w1, const CanonicalCode& w2,
                                        const CanonicalCode& big) const {
  const auto i = store_.index_of(w1);
  const auto j = store_.index_of(w2);
  const auto w = store_.index_of(big);
  if (big.size != w1.size + w2.size) return 0;
  const auto& t = split_table(w1.size, w2.size);
  for (const auto& e : t.rows[w]) {
    if (e.first == i && e.second == j) return ratio(e.count, t.denominator);
  }
  return 0;
}

EmbeddingDistribution FlagAlgebra::embeddings(const Chirotope& root, const CanonicalCode& omega) const {
  const auto idx = store_.index_of(omega);
  const auto& chi = chirotopes(omega.size)[idx];
  const int n = omega.size;
  const int k = root.size();
  EmbeddingDistribution out;
  if (k > n) return out;
  out.injections = falling_factorial(n, k);
  std::map<FlagCode, std::int64_t> counts;
  std::vector<char> in(n);
  for_each_embedding(chi, root, [&](const std::vector<int>& labels) {
    std::fill(in.begin(), in.end(), 0);
    for (int v : labels) in[v] = 1;
    std::vector<int> others;
    for (int v = 0; v < n; ++v) {
      if (!in[v]) others.push_back(v);
    }
    ++counts[labeled_flag(chi, labels, others)];
    ++out.admissible;
  });
  for (auto& [f, c] : counts) out.flags.push_back({f, c});
  return out;
}

std::string FlagAlgebra::density_csv(int k, int m) const {
  const auto& t = density_table(k, m);
  std::ostringstream out;
  out << "big\\small";
  for (std::size_t s = 0; s < t.small_count; ++s) out << ',' << s;
  out << '\n';
  for (std::size_t b = 0; b < t.big_count; ++b) {
    out << b;
    for (std::size_t s = 0; s < t.small_count; ++s) out << ',' << to_string(t.at(b, s));
    out << '\n';
  }
  return out.str();
}

}  // namespace ordertypes
