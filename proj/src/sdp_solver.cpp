// Small dense primal-dual interior point solver.
//
// The emitted program has one equality per omega, which is the natural form
// for external solvers but makes the Schur complement as large as |O_N|.
// Here the same program is solved with the matrix entries, b and the linear
// weights as the free vector y instead:
//   minimize -b  s.t.  M_i = sum y_t S_t >= 0,
//   f - g_J - b - sum <Q_i, M_i> - sum_{j<J} d_j (g_j - g_J) >= 0   (diagonal),
//   d_j >= 0, 1 - sum_{j<J} d_j >= 0                                 (diagonal),
// which is CSDP's dual form  sum y_t A_t - C = Z >= 0.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "ordertypes/sdp.hpp"

namespace ordertypes {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct SdpBlock {
  int n;
  int first;  // index of the first entry variable in y
  std::vector<std::pair<int, int>> entries;
};

struct DiagBlock {
  MatrixXd G;  // rows = block size, cols = number of unknowns
  VectorXd C;
};

struct Program {
  int p = 0;
  VectorXd a;
  std::vector<SdpBlock> sdp;
  std::vector<DiagBlock> diag;
  int b_index = 0;
  int d_first = -1;
  int d_free = 0;
};

Program make_program(const SdpInstance& inst) {
  Program prog;
  int p = 1;  // b
  for (const auto& blk : inst.blocks) {
    SdpBlock s;
    s.n = static_cast<int>(blk.basis.size());
    s.first = p;
    for (int a = 0; a < s.n; ++a) {
      for (int b = a; b < s.n; ++b) s.entries.emplace_back(a, b);
    }
    p += static_cast<int>(s.entries.size());
    prog.sdp.push_back(std::move(s));
  }
  const int J = static_cast<int>(inst.linear.size());
  if (J >= 2) {
    prog.d_first = p;
    prog.d_free = J - 1;
    p += J - 1;
  }
  prog.p = p;
  prog.a = VectorXd::Zero(p);
  prog.a(0) = -1;

  const int W = static_cast<int>(inst.omegas.size());
  DiagBlock lp;
  lp.G = MatrixXd::Zero(W, p);
  lp.C = VectorXd::Zero(W);
  for (int w = 0; w < W; ++w) {
    const double gJ = J > 0 ? inst.linear[J - 1][w].get_d() : 0.0;
    lp.C(w) = -(inst.f[w].get_d() - gJ);
    lp.G(w, 0) = -1;
    for (std::size_t i = 0; i < inst.blocks.size(); ++i) {
      const auto& blk = inst.blocks[i];
      const auto& s = prog.sdp[i];
      for (const auto& e : blk.q[w]) {
        // entry index of (a,b) in row-major upper triangle
        const int a = static_cast<int>(e.a), b = static_cast<int>(e.b);
        const int idx = a * s.n - a * (a - 1) / 2 + (b - a);
        const double weight = (a == b ? 1.0 : 2.0) * blk.value(e).get_d();
        lp.G(w, s.first + idx) -= weight;
      }
    }
    for (int j = 0; j + 1 < J; ++j) lp.G(w, prog.d_first + j) = -(inst.linear[j][w].get_d() - gJ);
  }
  prog.diag.push_back(std::move(lp));
  if (J >= 2) {
    DiagBlock d;
    d.G = MatrixXd::Zero(J, p);
    d.C = VectorXd::Zero(J);
    for (int j = 0; j + 1 < J; ++j) {
      d.G(j, prog.d_first + j) = 1;
      d.G(J - 1, prog.d_first + j) = -1;
    }
    d.C(J - 1) = -1;
    prog.diag.push_back(std::move(d));
  }
  return prog;
}

struct State {
  std::vector<MatrixXd> X, Z;
  std::vector<VectorXd> x, z;
  VectorXd y;
};

// A(X): one value per unknown.
VectorXd apply_A(const Program& prog, const std::vector<MatrixXd>& X, const std::vector<VectorXd>& x) {
  VectorXd out = VectorXd::Zero(prog.p);
  for (std::size_t i = 0; i < prog.sdp.size(); ++i) {
    const auto& s = prog.sdp[i];
    for (std::size_t t = 0; t < s.entries.size(); ++t) {
      const auto [a, b] = s.entries[t];
      out(s.first + static_cast<int>(t)) += a == b ? X[i](a, a) : X[i](a, b) + X[i](b, a);
    }
  }
  for (std::size_t k = 0; k < prog.diag.size(); ++k) out += prog.diag[k].G.transpose() * x[k];
  return out;
}

// sum y_t A_t, split into blocks.
void apply_At(const Program& prog, const VectorXd& y, std::vector<MatrixXd>& S, std::vector<VectorXd>& s) {
  S.resize(prog.sdp.size());
  s.resize(prog.diag.size());
  for (std::size_t i = 0; i < prog.sdp.size(); ++i) {
    const auto& blk = prog.sdp[i];
    S[i] = MatrixXd::Zero(blk.n, blk.n);
    for (std::size_t t = 0; t < blk.entries.size(); ++t) {
      const auto [a, b] = blk.entries[t];
      S[i](a, b) = y(blk.first + static_cast<int>(t));
      S[i](b, a) = y(blk.first + static_cast<int>(t));
    }
  }
  for (std::size_t k = 0; k < prog.diag.size(); ++k) s[k] = prog.diag[k].G * y;
}

double max_step(const MatrixXd& X, const MatrixXd& dX) {
  Eigen::LLT<MatrixXd> llt(X);
  const MatrixXd L = llt.matrixL();
  const MatrixXd Li = L.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(X.rows(), X.cols()));
  const MatrixXd M = Li * dX * Li.transpose();
  const double lmin = Eigen::SelfAdjointEigenSolver<MatrixXd>(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  return lmin < 0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double max_step(const VectorXd& x, const VectorXd& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (dx(i) < 0) a = std::min(a, -x(i) / dx(i));
  }
  return a;
}

}  // namespace

SolverResult solve(const SdpInstance& inst, const SolverOptions& options) {
  const Program prog = make_program(inst);
  const int p = prog.p;

  State st;
  double n_total = 0;
  for (const auto& s : prog.sdp) {
    st.X.push_back(MatrixXd::Identity(s.n, s.n) * 10);
    st.Z.push_back(MatrixXd::Identity(s.n, s.n) * 10);
    n_total += s.n;
  }
  for (const auto& d : prog.diag) {
    st.x.push_back(VectorXd::Constant(d.C.size(), 10));
    st.z.push_back(VectorXd::Constant(d.C.size(), 10));
    n_total += static_cast<double>(d.C.size());
  }
  st.y = VectorXd::Zero(p);

  double cnorm = 0;
  for (const auto& d : prog.diag) cnorm = std::max(cnorm, d.C.cwiseAbs().maxCoeff());

  SolverResult result;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;
    std::vector<MatrixXd> Ay;
    std::vector<VectorXd> ay;
    apply_At(prog, st.y, Ay, ay);

    // residuals: rp = a - A(X), rd = C - sum y A + Z
    const VectorXd rp = prog.a - apply_A(prog, st.X, st.x);
    std::vector<MatrixXd> RD(prog.sdp.size());
    std::vector<VectorXd> rd(prog.diag.size());
    double rd_norm = 0;
    double gap = 0;
    double primal_obj = 0;
    for (std::size_t i = 0; i < prog.sdp.size(); ++i) {
      RD[i] = -Ay[i] + st.Z[i];
      rd_norm = std::max(rd_norm, RD[i].cwiseAbs().maxCoeff());
      gap += (st.X[i].cwiseProduct(st.Z[i])).sum();
    }
    for (std::size_t k = 0; k < prog.diag.size(); ++k) {
      rd[k] = prog.diag[k].C - ay[k] + st.z[k];
      rd_norm = std::max(rd_norm, rd[k].cwiseAbs().maxCoeff());
      gap += st.x[k].dot(st.z[k]);
      primal_obj += prog.diag[k].C.dot(st.x[k]);
    }
    const double mu = gap / n_total;
    const double dual_obj = prog.a.dot(st.y);
    const double rel_gap = std::abs(dual_obj - primal_obj) / (1 + std::abs(dual_obj) + std::abs(primal_obj));
    const double pinf = rp.cwiseAbs().maxCoeff() / (1 + prog.a.cwiseAbs().maxCoeff());
    const double dinf = rd_norm / (1 + cnorm);
    if (options.verbose) {
      std::cerr << "iter " << iter << " b " << st.y(0) << " gap " << rel_gap << " pinf " << pinf << " dinf " << dinf << "\n";
    }
    if (rel_gap < options.tolerance && pinf < options.tolerance && dinf < options.tolerance) {
      result.converged = true;
      break;
    }

    // Schur complement O_st = tr(A_s X A_t Z^-1)
    std::vector<MatrixXd> Zi(prog.sdp.size());
    MatrixXd O = MatrixXd::Zero(p, p);
    for (std::size_t i = 0; i < prog.sdp.size(); ++i) {
      const auto& s = prog.sdp[i];
      Zi[i] = st.Z[i].llt().solve(MatrixXd::Identity(s.n, s.n));
      const auto& X = st.X[i];
      const auto& W = Zi[i];
      const int q = static_cast<int>(s.entries.size());
      for (int u = 0; u < q; ++u) {
        const auto [a, b] = s.entries[u];
        for (int v = u; v < q; ++v) {
          const auto [c, d] = s.entries[v];
          double val = X(b, c) * W(d, a) + X(b, d) * W(c, a) + X(a, c) * W(d, b) + X(a, d) * W(c, b);
          if (a == b) val *= 0.5;
          if (c == d) val *= 0.5;
          O(s.first + u, s.first + v) += val;
          if (u != v) O(s.first + v, s.first + u) += val;
        }
      }
    }
    std::vector<VectorXd> zi(prog.diag.size());
    for (std::size_t k = 0; k < prog.diag.size(); ++k) {
      zi[k] = st.z[k].cwiseInverse();
      const VectorXd ratio = st.x[k].cwiseProduct(zi[k]);
      O.noalias() += prog.diag[k].G.transpose() * ratio.asDiagonal() * prog.diag[k].G;
    }
    Eigen::LDLT<MatrixXd> schur(O);

    // One Newton solve for a given "target" T (the part of dX not depending on dy).
    struct Direction {
      VectorXd dy;
      std::vector<MatrixXd> dX, dZ;
      std::vector<VectorXd> dx, dz;
    };
    const auto newton = [&](const std::vector<MatrixXd>& T, const std::vector<VectorXd>& t) {
      Direction dir;
      std::vector<MatrixXd> rhsM(prog.sdp.size());
      std::vector<VectorXd> rhsv(prog.diag.size());
      for (std::size_t i = 0; i < prog.sdp.size(); ++i) rhsM[i] = T[i] + st.X[i] * RD[i] * Zi[i];
      for (std::size_t k = 0; k < prog.diag.size(); ++k) rhsv[k] = t[k] + st.x[k].cwiseProduct(rd[k]).cwiseProduct(zi[k]);
      const VectorXd rhs = apply_A(prog, rhsM, rhsv) - rp;
      dir.dy = schur.solve(rhs);
      std::vector<MatrixXd> S;
      std::vector<VectorXd> s;
      apply_At(prog, dir.dy, S, s);
      dir.dZ.resize(prog.sdp.size());
      dir.dX.resize(prog.sdp.size());
      for (std::size_t i = 0; i < prog.sdp.size(); ++i) {
        dir.dZ[i] = S[i] - RD[i];
        MatrixXd dX = T[i] - st.X[i] * dir.dZ[i] * Zi[i];
        dir.dX[i] = 0.5 * (dX + dX.transpose());
      }
      dir.dz.resize(prog.diag.size());
      dir.dx.resize(prog.diag.size());
      for (std::size_t k = 0; k < prog.diag.size(); ++k) {
        dir.dz[k] = s[k] - rd[k];
        dir.dx[k] = t[k] - st.x[k].cwiseProduct(dir.dz[k]).cwiseProduct(zi[k]);
      }
      return dir;
    };
    const auto steps = [&](const Direction& dir) {
      double ap = std::numeric_limits<double>::infinity(), ad = ap;
      for (std::size_t i = 0; i < prog.sdp.size(); ++i) {
        ap = std::min(ap, max_step(st.X[i], dir.dX[i]));
        ad = std::min(ad, max_step(st.Z[i], dir.dZ[i]));
      }
      for (std::size_t k = 0; k < prog.diag.size(); ++k) {
        ap = std::min(ap, max_step(st.x[k], dir.dx[k]));
        ad = std::min(ad, max_step(st.z[k], dir.dz[k]));
      }
      return std::pair{std::min(1.0, ap), std::min(1.0, ad)};
    };

    // predictor
    std::vector<MatrixXd> T(prog.sdp.size());
    std::vector<VectorXd> t(prog.diag.size());
    for (std::size_t i = 0; i < prog.sdp.size(); ++i) T[i] = -st.X[i];
    for (std::size_t k = 0; k < prog.diag.size(); ++k) t[k] = -st.x[k];
    const Direction aff = newton(T, t);
    const auto [ap_aff, ad_aff] = steps(aff);
    double gap_aff = 0;
    for (std::size_t i = 0; i < prog.sdp.size(); ++i) {
      gap_aff += ((st.X[i] + ap_aff * aff.dX[i]).cwiseProduct(st.Z[i] + ad_aff * aff.dZ[i])).sum();
    }
    for (std::size_t k = 0; k < prog.diag.size(); ++k) {
      gap_aff += (st.x[k] + ap_aff * aff.dx[k]).dot(st.z[k] + ad_aff * aff.dz[k]);
    }
    const double sigma = std::clamp(std::pow(gap_aff / gap, 3), 1e-4, 1.0);

    // corrector
    for (std::size_t i = 0; i < prog.sdp.size(); ++i) {
      T[i] = sigma * mu * Zi[i] - st.X[i] - aff.dX[i] * aff.dZ[i] * Zi[i];
    }
    for (std::size_t k = 0; k < prog.diag.size(); ++k) {
      t[k] = sigma * mu * zi[k] - st.x[k] - aff.dx[k].cwiseProduct(aff.dz[k]).cwiseProduct(zi[k]);
    }
    const Direction dir = newton(T, t);
    auto [ap, ad] = steps(dir);
    ap = std::min(1.0, 0.95 * ap);
    ad = std::min(1.0, 0.95 * ad);
    for (std::size_t i = 0; i < prog.sdp.size(); ++i) {
      st.X[i] += ap * dir.dX[i];
      st.Z[i] += ad * dir.dZ[i];
    }
    for (std::size_t k = 0; k < prog.diag.size(); ++k) {
      st.x[k] += ap * dir.dx[k];
      st.z[k] += ad * dir.dz[k];
    }
    st.y += ad * dir.dy;
  }

  // Translate to the emitted (one equality per omega) layout.
  const int W = static_cast<int>(inst.omegas.size());
  const int J = static_cast<int>(inst.linear.size());
  const double shift = inst.shift.get_d();
  auto& sol = result.solution;
  result.b = st.y(0);
  for (std::size_t i = 0; i < prog.sdp.size(); ++i) {
    const int n = prog.sdp[i].n;
    std::vector<double> xb(static_cast<std::size_t>(n) * n), zb(static_cast<std::size_t>(n) * n, 0.0);
    const MatrixXd M = st.Z[i];
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) xb[a * n + b] = M(a, b);
    }
    const auto& blk = inst.blocks[i];
    for (int w = 0; w < W; ++w) {
      const double yw = st.x[0](w);
      for (const auto& e : blk.q[w]) {
        const double v = yw * blk.value(e).get_d();
        zb[e.a * n + e.b] += v;
        if (e.a != e.b) zb[e.b * n + e.a] += v;
      }
    }
    sol.x.push_back(std::move(xb));
    sol.z.push_back(std::move(zb));
  }
  std::vector<double> xd(static_cast<std::size_t>(W + 1 + J), 0.0), zd(xd.size(), 0.0);
  double ysum = 0;
  for (int w = 0; w < W; ++w) {
    xd[w] = st.z[0](w);
    zd[w] = st.x[0](w);
    sol.y.push_back(st.x[0](w));
    ysum += st.x[0](w);
  }
  xd[W] = st.y(0) + shift;
  zd[W] = ysum - 1;
  if (J > 0) {
    double rest = 1;
    for (int j = 0; j + 1 < J; ++j) {
      xd[W + 1 + j] = st.y(prog.d_first + j);
      rest -= st.y(prog.d_first + j);
    }
    xd[W + J] = rest;
    std::vector<double> gy(J, 0.0);
    for (int j = 0; j < J; ++j) {
      for (int w = 0; w < W; ++w) gy[j] += st.x[0](w) * inst.linear[j][w].get_d();
    }
    const double ynorm = -*std::min_element(gy.begin(), gy.end());
    for (int j = 0; j < J; ++j) zd[W + 1 + j] = gy[j] + ynorm;
    sol.y.push_back(ynorm);
  }
  sol.x.push_back(std::move(xd));
  sol.z.push_back(std::move(zd));
  return result;
}

}  // namespace ordertypes
