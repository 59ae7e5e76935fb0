#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "ordertypes/algebra.hpp"
#include "ordertypes/combinatorics.hpp"

namespace ordertypes {

namespace {

std::string root_key(const Chirotope& root) { return std::to_string(root.size()) + ":" + root.sign_string(); }

Chirotope root_from_size_and_signs(int size, std::string_view signs) {
  std::vector<int> values;
  for (char c : signs) {
    if (c == '+') values.push_back(1);
    else if (c == '-') values.push_back(-1);
    else throw std::invalid_argument("root signs may only contain '+' and '-'");
  }
  return Chirotope::from_triples(size, values);
}

std::vector<int> iota_vec(int n, int from = 0) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), from);
  return v;
}

}  // namespace

// ---- AlgebraElement

AlgebraElement::AlgebraElement(int level, Chirotope root) : level_(level), root_(std::move(root)) {
  if (level_ < root_.size()) throw SizeMismatch("element level below its root size");
}

AlgebraElement AlgebraElement::of(const CanonicalCode& code, const Rational& coeff) {
  AlgebraElement e(code.size);
  e.add(code, coeff);
  return e;
}

AlgebraElement AlgebraElement::of(const FlagCode& flag, const Rational& coeff) {
  AlgebraElement e(flag.size, flag.labels > 0 ? flag_root(flag) : Chirotope{});
  e.add(flag, coeff);
  return e;
}

Rational AlgebraElement::coefficient(const FlagCode& flag) const {
  auto it = terms_.find(flag);
  return it == terms_.end() ? Rational(0) : it->second;
}

void AlgebraElement::add(const FlagCode& flag, const Rational& coeff) {
  if (flag.size != level_) throw SizeMismatch("term size " + std::to_string(flag.size) + " differs from level " + std::to_string(level_));
  if (flag.labels != root_.size()) throw RootMismatch("term label count differs from the root size");
  if (coeff == 0) return;
  auto [it, fresh] = terms_.try_emplace(flag, coeff);
  if (!fresh) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

void AlgebraElement::check_compatible(const AlgebraElement& other) const {
  if (!(root_ == other.root_)) throw RootMismatch("elements have different roots");
  if (level_ != other.level_) throw SizeMismatch("elements live at different levels; lift them first");
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  check_compatible(other);
  for (const auto& [f, c] : other.terms_) add(f, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  check_compatible(other);
  for (const auto& [f, c] : other.terms_) add(f, -c);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [f, v] : terms_) v *= c;
  return *this;
}

std::string AlgebraElement::to_json() const {
  nlohmann::ordered_json j;
  j["level"] = level_;
  if (rooted()) j["root"] = {{"size", root_.size()}, {"signs", root_.sign_string()}};
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& [f, c] : terms_) {
    j["terms"].push_back({{"code", f.labels > 0 ? f.hex() : f.as_order_type().hex()},
                          {"num", c.get_num().get_str()},
                          {"den", c.get_den().get_str()}});
  }
  return j.dump();
}

AlgebraElement AlgebraElement::from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  Chirotope root;
  if (j.contains("root") && !j["root"].is_null()) {
    root = root_from_size_and_signs(j["root"].at("size").get<int>(), j["root"].at("signs").get<std::string>());
  }
  AlgebraElement e(j.at("level").get<int>(), root);
  for (const auto& t : j.at("terms")) {
    const auto code = t.at("code").get<std::string>();
    const auto num = t.at("num").is_string() ? t.at("num").get<std::string>() : std::to_string(t.at("num").get<long long>());
    const auto den = t.at("den").is_string() ? t.at("den").get<std::string>() : std::to_string(t.at("den").get<long long>());
    Rational c{Integer(num), Integer(den)};
    c.canonicalize();
    if (e.rooted()) e.add(FlagCode::from_hex(code), c);
    else e.add(CanonicalCode::from_hex(code), c);
  }
  return e;
}

// ---- rooted tables

struct FlagAlgebra::FlagTables {
  Chirotope root;
  std::map<int, std::vector<FlagCode>> flags;
  std::unordered_map<FlagCode, std::size_t, CodeHash> index;
  std::map<std::pair<int, int>, DensityTable> densities;
  std::map<std::pair<int, int>, SplitTable> splits;
};

FlagAlgebra::FlagAlgebra(const OrderTypeStore& store) : store_(store) {}

FlagAlgebra::~FlagAlgebra() = default;

FlagAlgebra::FlagTables& FlagAlgebra::tables_for(const Chirotope& root) const {
  std::lock_guard lock(mutex_);
  auto& slot = flag_tables_[root_key(root)];
  if (!slot) {
    slot = std::make_unique<FlagTables>();
    slot->root = root;
  }
  return *slot;
}

const std::vector<FlagCode>& FlagAlgebra::flags(const Chirotope& root, int size) const {
  std::lock_guard lock(mutex_);
  auto& t = tables_for(root);
  auto it = t.flags.find(size);
  if (it != t.flags.end()) return it->second;
  std::vector<FlagCode> out;
  if (size >= root.size()) {
    std::unordered_map<FlagCode, char, CodeHash> seen;
    for (const auto& chi : chirotopes(size)) {
      std::vector<char> in(size);
      for_each_embedding(chi, root, [&](const std::vector<int>& labels) {
        std::fill(in.begin(), in.end(), 0);
        for (int v : labels) in[v] = 1;
        std::vector<int> others;
        for (int v = 0; v < size; ++v) {
          if (!in[v]) others.push_back(v);
        }
        auto f = labeled_flag(chi, labels, others);
        if (seen.emplace(f, 0).second) out.push_back(std::move(f));
      });
    }
    std::sort(out.begin(), out.end());
  }
  for (std::size_t i = 0; i < out.size(); ++i) t.index.emplace(out[i], i);
  return t.flags.emplace(size, std::move(out)).first->second;
}

std::size_t FlagAlgebra::flag_index(const FlagCode& flag) const {
  const auto root = flag_root(flag);
  flags(root, flag.size);
  std::lock_guard lock(mutex_);
  auto& t = tables_for(root);
  auto it = t.index.find(flag);
  if (it == t.index.end()) throw UnknownCode("unknown flag code " + flag.hex());
  return it->second;
}

const DensityTable& FlagAlgebra::flag_density_table(const Chirotope& root, int s, int m) const {
  std::lock_guard lock(mutex_);
  auto& t = tables_for(root);
  auto it = t.densities.find({s, m});
  if (it != t.densities.end()) return it->second;
  const int k = root.size();
  const auto& smalls = flags(root, s);
  const auto& bigs = flags(root, m);
  DensityTable d;
  d.k = s;
  d.m = m;
  d.small_count = smalls.size();
  d.big_count = bigs.size();
  d.denominator = binomial(m - k, s - k);
  d.counts.assign(d.small_count * d.big_count, 0);
  const auto labels = iota_vec(k);
  for (std::size_t b = 0; b < bigs.size(); ++b) {
    const auto chi = flag_chirotope(bigs[b]);
    for_each_subset(m - k, s - k, [&](const std::vector<int>& sub) {
      std::vector<int> others;
      for (int v : sub) others.push_back(v + k);
      ++d.counts[b * d.small_count + t.index.at(labeled_flag(chi, labels, others))];
    });
  }
  return t.densities.emplace(std::pair{s, m}, std::move(d)).first->second;
}

const SplitTable& FlagAlgebra::flag_split_table(const Chirotope& root, int a, int b) const {
  std::lock_guard lock(mutex_);
  auto& t = tables_for(root);
  auto it = t.splits.find({a, b});
  if (it != t.splits.end()) return it->second;
  const int k = root.size();
  const int n = a + b - k;
  flags(root, a);
  flags(root, b);
  const auto& bigs = flags(root, n);
  SplitTable st;
  st.denominator = binomial(n - k, a - k);
  st.rows.resize(bigs.size());
  const auto labels = iota_vec(k);
  for (std::size_t w = 0; w < bigs.size(); ++w) {
    const auto chi = flag_chirotope(bigs[w]);
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> counts;
    for_each_subset(n - k, a - k, [&](const std::vector<int>& sub) {
      std::vector<int> first, second;
      for (int v : sub) first.push_back(v + k);
      for (int v : complement(n - k, sub)) second.push_back(v + k);
      const auto i = static_cast<std::uint32_t>(t.index.at(labeled_flag(chi, labels, first)));
      const auto j = static_cast<std::uint32_t>(t.index.at(labeled_flag(chi, labels, second)));
      ++counts[{i, j}];
    });
    for (const auto& [ij, c] : counts) st.rows[w].push_back({ij.first, ij.second, c});
  }
  return t.splits.emplace(std::pair{a, b}, std::move(st)).first->second;
}

Rational FlagAlgebra::flag_density(const FlagCode& small, const FlagCode& big) const {
  const auto root = flag_root(small);
  if (small.labels != big.labels || !(flag_root(big) == root)) throw RootMismatch("flags have different roots");
  if (small.size > big.size) throw SizeMismatch("flag density needs |small| <= |big|");
  const auto s = flag_index(small);
  const auto b = flag_index(big);
  return flag_density_table(root, small.size, big.size).at(b, s);
}

Rational FlagAlgebra::flag_split_probability(const FlagCode& t1, const FlagCode& t2, const FlagCode& big) const {
  const auto root = flag_root(t1);
  if (t2.labels != t1.labels || big.labels != t1.labels || !(flag_root(t2) == root) || !(flag_root(big) == root)) {
    throw RootMismatch("flags have different roots");
  }
  const auto i = flag_index(t1);
  const auto j = flag_index(t2);
  const auto w = flag_index(big);
  if (big.size != t1.size + t2.size - t1.labels) return 0;
  const auto& st = flag_split_table(root, t1.size, t2.size);
  for (const auto& e : st.rows[w]) {
    if (e.first == i && e.second == j) return ratio(e.count, st.denominator);
  }
  return 0;
}

// ---- algebra operations

AlgebraElement FlagAlgebra::lift(const AlgebraElement& a, int level) const {
  if (level < a.level()) throw SizeMismatch("cannot lift to a smaller level");
  if (level == a.level()) return a;
  AlgebraElement out(level, a.root());
  if (!a.rooted()) {
    const auto& table = density_table(a.level(), level);
    const auto& bigs = store_.records(level);
    for (std::size_t b = 0; b < bigs.size(); ++b) {
      Rational c = 0;
      for (const auto& [f, v] : a.terms()) {
        const auto cnt = table.count(b, store_.index_of(f.as_order_type()));
        if (cnt) c += v * cnt;
      }
      out.add(bigs[b].code, c / table.denominator);
    }
    return out;
  }
  const auto& bigs = flags(a.root(), level);
  const auto& table = flag_density_table(a.root(), a.level(), level);
  for (std::size_t b = 0; b < bigs.size(); ++b) {
    Rational c = 0;
    for (const auto& [f, v] : a.terms()) {
      const auto cnt = table.count(b, flag_index(f));
      if (cnt) c += v * cnt;
    }
    out.add(bigs[b], c / table.denominator);
  }
  return out;
}

AlgebraElement FlagAlgebra::product(const AlgebraElement& a, const AlgebraElement& b) const {
  if (!(a.root() == b.root())) throw RootMismatch("product of elements with different roots");
  const int k = a.root().size();
  const int level = a.level() + b.level() - k;
  AlgebraElement out(level, a.root());
  if (a.terms().empty() || b.terms().empty()) return out;

  std::unordered_map<std::uint32_t, Rational> ca, cb;
  const SplitTable* table;
  const std::vector<FlagCode>* bigs = nullptr;
  if (!a.rooted()) {
    if (!store_.has_size(level)) throw MissingSize(level);
    for (const auto& [f, v] : a.terms()) ca[static_cast<std::uint32_t>(store_.index_of(f.as_order_type()))] = v;
    for (const auto& [f, v] : b.terms()) cb[static_cast<std::uint32_t>(store_.index_of(f.as_order_type()))] = v;
    table = &split_table(a.level(), b.level());
  } else {
    for (const auto& [f, v] : a.terms()) ca[static_cast<std::uint32_t>(flag_index(f))] = v;
    for (const auto& [f, v] : b.terms()) cb[static_cast<std::uint32_t>(flag_index(f))] = v;
    table = &flag_split_table(a.root(), a.level(), b.level());
    bigs = &flags(a.root(), level);
  }
  for (std::size_t w = 0; w < table->rows.size(); ++w) {
    Rational c = 0;
    for (const auto& e : table->rows[w]) {
      auto x = ca.find(e.first);
      if (x == ca.end()) continue;
      auto y = cb.find(e.second);
      if (y == cb.end()) continue;
      c += x->second * y->second * e.count;
    }
    if (c == 0) continue;
    c /= table->denominator;
    if (bigs) out.add((*bigs)[w], c);
    else out.add(store_.records(level)[w].code, c);
  }
  return out;
}

AlgebraElement FlagAlgebra::average(const AlgebraElement& a) const {
  if (!a.rooted()) return a;
  AlgebraElement out(a.level());
  for (const auto& [f, v] : a.terms()) {
    const auto omega = canonical_code(flag_chirotope(f));
    out.add(omega, v * embeddings(a.root(), omega).probability(f));
  }
  return out;
}

Rational FlagAlgebra::evaluate(const AlgebraElement& a, const LimitVector& l) const {
  if (a.rooted()) throw RootMismatch("only unrooted elements can be evaluated");
  if (a.level() > l.level) throw SizeMismatch("limit vector level is below the element level");
  const auto lifted = lift(a, l.level);
  Rational out = 0;
  for (const auto& [code, w] : l.weights) {
    if (code.size != l.level) throw SizeMismatch("limit vector weight at the wrong size");
    out += lifted.coefficient(code) * w;
  }
  return out;
}

Rational FlagAlgebra::evaluate(const AlgebraElement& a, const CanonicalCode& omega) const {
  if (a.rooted()) throw RootMismatch("only unrooted elements can be evaluated");
  if (a.level() > omega.size) throw SizeMismatch("order type smaller than the element level");
  Rational out = 0;
  for (const auto& [f, v] : a.terms()) out += v * density(f.as_order_type(), omega);
  return out;
}

bool FlagAlgebra::equivalent(const AlgebraElement& a, const AlgebraElement& b) const {
  if (!(a.root() == b.root())) return false;
  const int level = std::max(a.level(), b.level());
  return lift(a, level) == lift(b, level);
}

}  // namespace ordertypes
