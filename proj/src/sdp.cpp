#include "ordertypes/sdp.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "ordertypes/combinatorics.hpp"

namespace ordertypes {

TargetSpec TargetSpec::density_of(const FlagAlgebra& algebra, const CanonicalCode& small, int level) {
  TargetSpec t;
  t.level = level;
  for (const auto& r : algebra.store().records(level)) t.f.push_back(algebra.density(small, r.code));
  return t;
}

int flag_size_for(int level, int root_size) { return (level + root_size) / 2; }

namespace {

RootBlock build_block(const FlagAlgebra& algebra, int level, const Chirotope& root, int threads) {
  const int k = root.size();
  if (k > level) throw ParityViolation("root of size " + std::to_string(k) + " exceeds level " + std::to_string(level));
  RootBlock block;
  block.root = root;
  block.flag_size = flag_size_for(level, k);
  block.basis = algebra.flags(root, block.flag_size);
  if (block.basis.empty()) throw ParityViolation("root has no flags at size " + std::to_string(block.flag_size));
  std::unordered_map<FlagCode, std::uint32_t, CodeHash> index;
  for (std::size_t i = 0; i < block.basis.size(); ++i) index.emplace(block.basis[i], static_cast<std::uint32_t>(i));

  const int free = level - k;
  const int r = block.flag_size - k;
  std::vector<std::vector<int>> subsets;
  std::vector<unsigned> masks;
  for_each_subset(free, r, [&](const std::vector<int>& s) {
    subsets.push_back(s);
    unsigned m = 0;
    for (int v : s) m |= 1u << v;
    masks.push_back(m);
  });
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t s = 0; s < subsets.size(); ++s) {
    for (std::uint32_t t = 0; t < subsets.size(); ++t) {
      if ((masks[s] & masks[t]) == 0) pairs.emplace_back(s, t);
    }
  }
  block.denominator = falling_factorial(level, k) * static_cast<std::int64_t>(pairs.size());

  const auto& omegas = algebra.chirotopes(level);
  block.q.resize(omegas.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    std::vector<std::uint32_t> idx(subsets.size());
    std::vector<char> in(level);
    for (std::size_t w = next++; w < omegas.size(); w = next++) {
      const auto& chi = omegas[w];
      std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> counts;
      for_each_embedding(chi, root, [&](const std::vector<int>& labels) {
        std::fill(in.begin(), in.end(), 0);
        for (int v : labels) in[v] = 1;
        std::vector<int> others;
        for (int v = 0; v < level; ++v) {
          if (!in[v]) others.push_back(v);
        }
        std::vector<int> chosen(r);
        for (std::size_t s = 0; s < subsets.size(); ++s) {
          for (int t = 0; t < r; ++t) chosen[t] = others[subsets[s][t]];
          idx[s] = index.at(labeled_flag(chi, labels, chosen));
        }
        for (const auto& [s, t] : pairs) {
          const auto a = std::min(idx[s], idx[t]);
          const auto b = std::max(idx[s], idx[t]);
          counts[{a, b}] += (a == b) ? 2 : 1;
        }
      });
      auto& row = block.q[w];
      for (const auto& [ab, c] : counts) row.push_back({ab.first, ab.second, c});
    }
  };
  const int n = std::max(1, threads);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return block;
}

Rational compute_shift(const SdpInstance& inst) {
  Rational shift = 0;
  for (const auto& v : inst.f) shift = std::max(shift, Rational(-v));
  Rational g = 0;
  for (const auto& row : inst.linear) {
    for (const auto& v : row) g = std::max(g, Rational(abs(v)));
  }
  return shift + g;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string rational_str(const Rational& r) { return to_string(r); }

// Layout of the diagonal block: s_omega (one per omega), b', d_j.
struct DiagLayout {
  int omegas, linear;
  int size() const { return omegas + 1 + linear; }
  int b_pos() const { return omegas; }
  int d_pos(int j) const { return omegas + 1 + j; }
};

DiagLayout layout_of(const SdpInstance& inst) {
  return {static_cast<int>(inst.omegas.size()), static_cast<int>(inst.linear.size())};
}

}  // namespace

SdpInstance build_instance(const FlagAlgebra& algebra, const TargetSpec& target, const std::vector<Chirotope>& roots,
                           int threads) {
  const auto& store = algebra.store();
  if (!store.has_size(target.level)) throw MissingSize(target.level);
  if (target.f.size() != store.count(target.level)) {
    throw std::invalid_argument("target needs one coefficient per order type of its level");
  }
  SdpInstance inst;
  inst.level = target.level;
  for (const auto& r : store.records(target.level)) inst.omegas.push_back(r.code);
  inst.f = target.f;
  for (const auto& root : roots) inst.blocks.push_back(build_block(algebra, target.level, root, threads));
  inst.shift = compute_shift(inst);
  return inst;
}

SdpInstance feasibility_instance(const FlagAlgebra& algebra, int level, const std::vector<CanonicalCode>& weights,
                                 const Rational& c, Direction direction, const std::vector<Chirotope>& roots,
                                 int threads) {
  if (weights.empty()) throw std::invalid_argument("feasibility instance needs at least one weight");
  TargetSpec t;
  t.level = level;
  t.f.assign(algebra.store().count(level), 0);
  auto inst = build_instance(algebra, t, roots, threads);
  inst.kind = InstanceKind::Refutation;
  for (const auto& w : weights) {
    std::vector<Rational> g;
    for (const auto& omega : inst.omegas) {
      Rational v = algebra.density(w, omega) - c;
      g.push_back(direction == Direction::AtLeast ? v : Rational(-v));
    }
    inst.linear.push_back(std::move(g));
    inst.linear_labels.push_back(w);
  }
  inst.shift = compute_shift(inst);
  return inst;
}

void emit_sdpa(const SdpInstance& inst, std::ostream& out) {
  const auto diag = layout_of(inst);
  const int diag_block = static_cast<int>(inst.blocks.size()) + 1;
  const int m = diag.omegas + (diag.linear > 0 ? 1 : 0);
  out << "* order type density program, level " << inst.level << ", " << inst.blocks.size() << " roots, shift "
      << rational_str(inst.shift) << "\n";
  out << m << "\n" << inst.blocks.size() + 1 << "\n";
  for (const auto& b : inst.blocks) out << b.basis.size() << ' ';
  out << -diag.size() << "\n";
  for (std::size_t w = 0; w < inst.omegas.size(); ++w) out << fmt(Rational(inst.f[w] + inst.shift).get_d()) << ' ';
  if (diag.linear > 0) out << 1;
  out << "\n";
  out << "0 " << diag_block << ' ' << diag.b_pos() + 1 << ' ' << diag.b_pos() + 1 << " 1\n";
  for (std::size_t w = 0; w < inst.omegas.size(); ++w) {
    const auto row = w + 1;
    for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
      const auto& blk = inst.blocks[i];
      for (const auto& e : blk.q[w]) {
        out << row << ' ' << i + 1 << ' ' << e.a + 1 << ' ' << e.b + 1 << ' ' << fmt(blk.value(e).get_d()) << "\n";
      }
    }
    out << row << ' ' << diag_block << ' ' << row << ' ' << row << " 1\n";
    out << row << ' ' << diag_block << ' ' << diag.b_pos() + 1 << ' ' << diag.b_pos() + 1 << " 1\n";
    for (int j = 0; j < diag.linear; ++j) {
      const auto& g = inst.linear[j][w];
      if (g != 0) out << row << ' ' << diag_block << ' ' << diag.d_pos(j) + 1 << ' ' << diag.d_pos(j) + 1 << ' ' << fmt(g.get_d()) << "\n";
    }
  }
  if (diag.linear > 0) {
    for (int j = 0; j < diag.linear; ++j) {
      out << m << ' ' << diag_block << ' ' << diag.d_pos(j) + 1 << ' ' << diag.d_pos(j) + 1 << " 1\n";
    }
  }
}

std::string sdpa_string(const SdpInstance& instance) {
  std::ostringstream out;
  emit_sdpa(instance, out);
  return out.str();
}

namespace {

// SDPA allows ',', '{', '}', '(', ')' as separators.
std::string clean_line(std::string line) {
  for (auto& ch : line) {
    if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
  }
  return line;
}

}  // namespace

SdpaProblem parse_sdpa(std::istream& in) {
  SdpaProblem p;
  std::vector<std::string> tokens;
  std::string line;
  int stage = 0;  // 0 m, 1 nblocks, 2 sizes, 3 c, 4 entries
  int nblocks = 0;
  std::vector<double> pending;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '*' || line[0] == '"') continue;
    std::istringstream ls(clean_line(line));
    std::string tok;
    while (ls >> tok) pending.push_back(std::stod(tok));
    while (true) {
      if (stage == 0 && !pending.empty()) {
        p.constraints = static_cast<int>(pending.front());
        pending.erase(pending.begin());
        stage = 1;
      } else if (stage == 1 && !pending.empty()) {
        nblocks = static_cast<int>(pending.front());
        pending.erase(pending.begin());
        stage = 2;
      } else if (stage == 2 && static_cast<int>(pending.size()) >= nblocks) {
        for (int i = 0; i < nblocks; ++i) p.block_sizes.push_back(static_cast<int>(pending[i]));
        pending.erase(pending.begin(), pending.begin() + nblocks);
        stage = 3;
      } else if (stage == 3 && static_cast<int>(pending.size()) >= p.constraints) {
        p.c.assign(pending.begin(), pending.begin() + p.constraints);
        pending.erase(pending.begin(), pending.begin() + p.constraints);
        stage = 4;
      } else if (stage == 4 && pending.size() >= 5) {
        p.entries.push_back({static_cast<int>(pending[0]), static_cast<int>(pending[1]), static_cast<int>(pending[2]),
                             static_cast<int>(pending[3]), pending[4]});
        pending.erase(pending.begin(), pending.begin() + 5);
      } else {
        break;
      }
    }
  }
  if (stage < 4 || !pending.empty()) throw std::runtime_error("malformed SDPA input");
  return p;
}

namespace {

std::vector<std::vector<double>> empty_blocks(const SdpInstance& inst) {
  std::vector<std::vector<double>> blocks;
  for (const auto& b : inst.blocks) blocks.emplace_back(b.basis.size() * b.basis.size(), 0.0);
  blocks.emplace_back(static_cast<std::size_t>(layout_of(inst).size()), 0.0);
  return blocks;
}

}  // namespace

SolverSolution parse_solution(std::istream& in, const SdpInstance& inst) {
  SolverSolution sol;
  std::string line;
  while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  {
    std::istringstream ls(line);
    double v;
    while (ls >> v) sol.y.push_back(v);
  }
  const auto diag = layout_of(inst);
  const std::size_t expected_y = static_cast<std::size_t>(diag.omegas + (diag.linear > 0 ? 1 : 0));
  if (sol.y.size() != expected_y) throw std::runtime_error("solution y vector has the wrong length");
  sol.x = empty_blocks(inst);
  sol.z = empty_blocks(inst);
  const std::size_t nblocks = inst.blocks.size() + 1;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    int mat, blk, i, j;
    double v;
    if (!(ls >> mat)) continue;
    if (!(ls >> blk >> i >> j >> v)) throw std::runtime_error("malformed solution line: " + line);
    if (mat != 1 && mat != 2) throw std::runtime_error("solution matrix number must be 1 or 2");
    if (blk < 1 || static_cast<std::size_t>(blk) > nblocks) throw std::runtime_error("solution block out of range");
    auto& target = (mat == 2 ? sol.x : sol.z)[blk - 1];
    if (static_cast<std::size_t>(blk) == nblocks) {
      if (i != j || i < 1 || i > diag.size()) throw std::runtime_error("bad diagonal block entry");
      target[i - 1] = v;
    } else {
      const auto n = static_cast<int>(inst.blocks[blk - 1].basis.size());
      if (i < 1 || j < 1 || i > n || j > n) throw std::runtime_error("solution entry out of range");
      target[(i - 1) * n + (j - 1)] = v;
      target[(j - 1) * n + (i - 1)] = v;
    }
  }
  return sol;
}

void write_solution(const SolverSolution& sol, const SdpInstance& inst, std::ostream& out) {
  for (std::size_t i = 0; i < sol.y.size(); ++i) out << (i ? " " : "") << fmt(sol.y[i]);
  out << "\n";
  const std::size_t nblocks = inst.blocks.size() + 1;
  for (int mat = 1; mat <= 2; ++mat) {
    const auto& blocks = mat == 1 ? sol.z : sol.x;
    for (std::size_t b = 0; b < nblocks && b < blocks.size(); ++b) {
      if (b + 1 == nblocks) {
        for (std::size_t i = 0; i < blocks[b].size(); ++i) {
          if (blocks[b][i] != 0) out << mat << ' ' << b + 1 << ' ' << i + 1 << ' ' << i + 1 << ' ' << fmt(blocks[b][i]) << "\n";
        }
      } else {
        const auto n = inst.blocks[b].basis.size();
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i; j < n; ++j) {
            const double v = blocks[b][i * n + j];
            if (v != 0) out << mat << ' ' << b + 1 << ' ' << i + 1 << ' ' << j + 1 << ' ' << fmt(v) << "\n";
          }
        }
      }
    }
  }
}

// ---- certificates

namespace {

nlohmann::ordered_json root_json(const Chirotope& r) { return {{"size", r.size()}, {"signs", r.sign_string()}}; }

Chirotope root_from_json(const nlohmann::json& j) {
  std::vector<int> signs;
  for (char c : j.at("signs").get<std::string>()) signs.push_back(c == '+' ? 1 : c == '-' ? -1 : 0);
  return Chirotope::from_triples(j.at("size").get<int>(), signs);
}

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw std::invalid_argument("certificate numbers must be \"p/q\" strings");
}

}  // namespace

std::string Certificate::to_json() const {
  nlohmann::ordered_json j;
  j["roots"] = nlohmann::ordered_json::array();
  for (const auto& r : roots) j["roots"].push_back(root_json(r));
  j["squares"] = nlohmann::ordered_json::array();
  for (const auto& s : squares) {
    nlohmann::ordered_json sj;
    sj["root"] = s.root;
    sj["lambda"] = to_string(s.lambda);
    sj["u"] = nlohmann::ordered_json::array();
    for (const auto& v : s.u) sj["u"].push_back(to_string(v));
    j["squares"].push_back(std::move(sj));
  }
  if (!d.empty()) {
    j["d"] = nlohmann::ordered_json::array();
    for (const auto& v : d) j["d"].push_back(to_string(v));
  }
  j["b"] = to_string(b);
  if (!basis.empty()) {
    j["basis"] = nlohmann::ordered_json::array();
    for (const auto& list : basis) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& f : list) arr.push_back(f.hex());
      j["basis"].push_back(std::move(arr));
    }
  }
  return j.dump(1);
}

Certificate Certificate::from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  Certificate c;
  for (const auto& r : j.at("roots")) c.roots.push_back(root_from_json(r));
  for (const auto& s : j.at("squares")) {
    Square sq;
    sq.root = s.at("root").get<int>();
    sq.lambda = rational_from_json(s.at("lambda"));
    for (const auto& v : s.at("u")) sq.u.push_back(rational_from_json(v));
    c.squares.push_back(std::move(sq));
  }
  if (j.contains("d")) {
    for (const auto& v : j.at("d")) c.d.push_back(rational_from_json(v));
  }
  c.b = rational_from_json(j.at("b"));
  if (j.contains("basis")) {
    for (const auto& list : j.at("basis")) {
      std::vector<FlagCode> codes;
      for (const auto& h : list) codes.push_back(FlagCode::from_hex(h.get<std::string>()));
      c.basis.push_back(std::move(codes));
    }
  }
  return c;
}

std::vector<Rational> certificate_quadratic(const SdpInstance& inst, const Certificate& cert) {
  std::vector<Rational> out(inst.omegas.size(), 0);
  for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
    const auto& blk = inst.blocks[i];
    const auto n = blk.basis.size();
    std::vector<Rational> m;  // upper triangle of sum lambda u u^T, row-major n x n
    for (const auto& s : cert.squares) {
      if (s.root != static_cast<int>(i)) continue;
      if (m.empty()) m.assign(n * n, 0);
      for (std::size_t a = 0; a < n; ++a) {
        if (s.u[a] == 0) continue;
        const Rational la = s.lambda * s.u[a];
        for (std::size_t b = a; b < n; ++b) {
          if (s.u[b] != 0) m[a * n + b] += la * s.u[b];
        }
      }
    }
    if (m.empty()) continue;
    for (std::size_t w = 0; w < inst.omegas.size(); ++w) {
      Rational acc = 0;
      for (const auto& e : blk.q[w]) {
        const auto& v = m[e.a * n + e.b];
        if (v == 0) continue;
        acc += v * static_cast<long>(e.a == e.b ? e.count : 2 * e.count);
      }
      if (acc != 0) out[w] += acc / (2 * blk.denominator);
    }
  }
  return out;
}

Verification verify_certificate(const SdpInstance& inst, const Certificate& cert) {
  Verification v;
  const auto reject = [&](std::string reason) {
    v.accepted = false;
    v.reason = std::move(reason);
    return v;
  };
  if (cert.roots.size() != inst.blocks.size()) return reject("certificate has " + std::to_string(cert.roots.size()) + " roots, instance has " + std::to_string(inst.blocks.size()));
  for (std::size_t i = 0; i < cert.roots.size(); ++i) {
    if (!(cert.roots[i] == inst.blocks[i].root)) return reject("root " + std::to_string(i) + " differs from the instance");
    if (!cert.basis.empty() && (cert.basis.size() <= i || cert.basis[i] != inst.blocks[i].basis)) {
      return reject("flag basis of root " + std::to_string(i) + " differs from the instance");
    }
  }
  for (std::size_t s = 0; s < cert.squares.size(); ++s) {
    const auto& sq = cert.squares[s];
    if (sq.root < 0 || sq.root >= static_cast<int>(inst.blocks.size())) return reject("square " + std::to_string(s) + " names an unknown root");
    if (sq.lambda < 0) return reject("square " + std::to_string(s) + " has negative lambda");
    if (sq.u.size() != inst.blocks[sq.root].basis.size()) return reject("square " + std::to_string(s) + " has the wrong length");
  }
  if (inst.linear.empty()) {
    if (!cert.d.empty()) return reject("certificate carries linear weights but the instance has none");
  } else {
    if (cert.d.size() != inst.linear.size()) return reject("certificate needs one weight per linear term");
    Rational total = 0;
    for (const auto& d : cert.d) {
      if (d < 0) return reject("negative linear weight");
      total += d;
    }
    if (total != 1) return reject("linear weights do not sum to 1");
  }

  const auto quad = certificate_quadratic(inst, cert);
  std::size_t arg = 0;
  for (std::size_t w = 0; w < inst.omegas.size(); ++w) {
    Rational value = inst.f[w] - quad[w];
    for (std::size_t j = 0; j < inst.linear.size(); ++j) value -= cert.d[j] * inst.linear[j][w];
    if (w == 0 || value < v.best_bound) {
      v.best_bound = value;
      arg = w;
    }
  }
  if (cert.b > v.best_bound) {
    v.violated = arg;
    return reject("coefficient violated at omega " + inst.omegas[arg].hex());
  }
  if (inst.kind == InstanceKind::Refutation && cert.b <= 0) {
    v.violated = arg;
    return reject("bound is not positive, so nothing is refuted");
  }
  v.accepted = true;
  v.bound = cert.b;
  return v;
}

IngestReport ingest_solution(const SdpInstance& inst, const SolverSolution& sol, const IngestOptions& options) {
  IngestReport rep;
  auto& cert = rep.certificate;
  const Rational scale(options.denominator);
  const auto round_to = [&](double x) {
    Rational r(x);
    r *= scale;
    Integer q;
    Rational shifted = r + Rational(1, 2);
    mpz_fdiv_q(q.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
    Rational out(q, options.denominator);
    out.canonicalize();
    return out;
  };
  if (sol.x.size() != inst.blocks.size() + 1) throw std::runtime_error("solution has the wrong number of blocks");

  for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
    cert.roots.push_back(inst.blocks[i].root);
    cert.basis.push_back(inst.blocks[i].basis);
    const auto n = static_cast<Eigen::Index>(inst.blocks[i].basis.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) m(a, b) = sol.x[i][a * n + b];
    }
    m = (0.5 * (m + m.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    double shift = 0;
    if (es.eigenvalues().minCoeff() < 0) shift = 1.01 * -es.eigenvalues().minCoeff();
    rep.eigen_shift.push_back(shift);
    for (Eigen::Index t = 0; t < n; ++t) {
      const double lambda = es.eigenvalues()(t) + shift;
      Certificate::Square sq;
      sq.root = static_cast<int>(i);
      sq.lambda = round_to(lambda);
      if (sq.lambda <= 0) continue;
      bool nonzero = false;
      for (Eigen::Index a = 0; a < n; ++a) {
        sq.u.push_back(round_to(es.eigenvectors()(a, t)));
        nonzero = nonzero || sq.u.back() != 0;
      }
      if (nonzero) cert.squares.push_back(std::move(sq));
    }
  }

  const auto diag = layout_of(inst);
  const auto& dx = sol.x.back();
  rep.solver_b = dx[diag.b_pos()] - inst.shift.get_d();
  if (diag.linear > 0) {
    Rational total = 0;
    for (int j = 0; j < diag.linear; ++j) {
      auto d = round_to(std::max(0.0, dx[diag.d_pos(j)]));
      cert.d.push_back(d);
      total += d;
    }
    if (total == 0) {
      for (auto& d : cert.d) d = ratio(1, diag.linear);
    } else {
      for (auto& d : cert.d) d /= total;
    }
  }

  cert.b = 0;
  auto v = verify_certificate(inst, cert);
  cert.b = v.best_bound;
  rep.degraded = cert.b.get_d() < rep.solver_b - 1e-6;
  return rep;
}

}  // namespace ordertypes
