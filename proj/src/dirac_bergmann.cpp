#include "maxham/dirac_bergmann.hpp"

#include <cmath>
#include <limits>

namespace maxham::db {

namespace {

double eval_L(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  const double v = sys.lagrangian(t, q, qdot);
  if (!std::isfinite(v))
    throw EvaluationFailure("Lagrangian non-finite at probe point");
  return v;
}

// dL/dqdot by central differences.
Vec grad_qdot(const LagrangianSystem& sys, double t, const Vec& q, const Vec& qdot) {
  Vec g(sys.dim);
  Vec v = qdot;
  for (int i = 0; i < sys.dim; ++i) {
    const double h = fd_step(qdot[i]);
    const double x0 = qdot[i];
    v[i] = x0 + h;
    const double fp = eval_L(sys, t, q, v);
    v[i] = x0 - h;
    const double fm = eval_L(sys, t, q, v);
    v[i] = x0;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

struct KernelSplit {
  int rank;
  Mat range;   // n x rank, orthonormal
  Mat kernel;  // n x (n-rank), orthonormal
};

KernelSplit split_by_rank(const Mat& W, double tol) {
  Eigen::JacobiSVD<Mat> svd(W, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++rank;
  KernelSplit ks;
  ks.rank = rank;
  ks.range = svd.matrixV().leftCols(rank);
  ks.kernel = svd.matrixV().rightCols(W.rows() - rank);
  return ks;
}

// Solve V' (p - dL/dqdot(q, seed + V y)) = 0 for y by damped Newton.
Vec solve_velocities(const LagrangianSystem& sys, double t, const Vec& q,
                     const Vec& p, const Vec& seed, const Mat& range) {
  if (range.cols() == 0) return seed;
  Vec y = Vec::Zero(range.cols());
  auto residual = [&](const Vec& yy) -> Vec {
    return range.transpose() * (p - grad_qdot(sys, t, q, seed + range * yy));
  };
  Vec r = residual(y);
  const double scale = std::max(1.0, p.norm());
  for (int iter = 0; iter < 60; ++iter) {
    if (r.norm() <= 1e-10 * scale) return seed + range * y;
    const Mat W = velocity_hessian(sys, t, q, seed + range * y);
    const Mat J = range.transpose() * W * range;  // d residual / dy = -J
    const Vec dy = J.colPivHouseholderQr().solve(r);
    double step = 1.0;
    for (int back = 0; back < 30; ++back) {
      const Vec y_try = y + step * dy;
      const Vec r_try = residual(y_try);
      if (r_try.norm() < r.norm() || r_try.norm() <= 1e-10 * scale) {
        y = y_try;
        r = r_try;
        break;
      }
      step *= 0.5;
      if (back == 29)
        throw NewtonDivergence("velocity solve stalled, residual " +
                               std::to_string(r.norm()));
    }
  }
  if (r.norm() <= 1e-8 * scale) return seed + range * y;
  throw NewtonDivergence("velocity solve did not converge, residual " +
                         std::to_string(r.norm()));
}

// Gradient of a phase function with respect to q or p.
Vec phase_grad(const PhaseFn& f, double t, const Vec& q, const Vec& p, bool wrt_q) {
  const Vec& x = wrt_q ? q : p;
  Vec g(x.size());
  Vec v = x;
  for (int i = 0; i < x.size(); ++i) {
    const double h = fd_step(x[i]);
    const double x0 = v[i];
    v[i] = x0 + h;
    const double fp = wrt_q ? f(t, v, p) : f(t, q, v);
    v[i] = x0 - h;
    const double fm = wrt_q ? f(t, v, p) : f(t, q, v);
    v[i] = x0;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw EvaluationFailure("phase function non-finite at probe point");
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace

double fd_step(double x) {
  static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
  return h0 * std::max(1.0, std::abs(x));
}

Mat velocity_hessian(const LagrangianSystem& sys, double t, const Vec& q,
                     const Vec& qdot) {
  const int n = sys.dim;
  Mat W(n, n);
  Vec v = qdot;
  for (int i = 0; i < n; ++i) {
    const double hi = fd_step(qdot[i]);
    // diagonal: (L(+h) - 2L(0) + L(-h)) / h^2
    const double x0 = v[i];
    const double f0 = eval_L(sys, t, q, v);
    v[i] = x0 + hi;
    const double fp = eval_L(sys, t, q, v);
    v[i] = x0 - hi;
    const double fm = eval_L(sys, t, q, v);
    v[i] = x0;
    W(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
    for (int j = i + 1; j < n; ++j) {
      const double hj = fd_step(qdot[j]);
      const double y0 = v[j];
      v[i] = x0 + hi; v[j] = y0 + hj;
      const double fpp = eval_L(sys, t, q, v);
      v[j] = y0 - hj;
      const double fpm = eval_L(sys, t, q, v);
      v[i] = x0 - hi; v[j] = y0 + hj;
      const double fmp = eval_L(sys, t, q, v);
      v[j] = y0 - hj;
      const double fmm = eval_L(sys, t, q, v);
      v[i] = x0; v[j] = y0;
      W(i, j) = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
      W(j, i) = W(i, j);
    }
  }
  // symmetrize
  Mat Ws = 0.5 * (W + W.transpose());
  return Ws;
}

SingularityReport singularity_report(const Mat& W, double tol) {
  Eigen::JacobiSVD<Mat> svd(W, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double norm = sv.size() ? sv(0) : 0.0;
  const double thr = tol * std::max(1.0, norm);
  SingularityReport rep;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++rep.rank;
  rep.is_singular = rep.rank < W.rows();
  rep.null_basis = svd.matrixV().rightCols(W.rows() - rep.rank);
  return rep;
}

ConstrainedHamiltonian legendre_transform(const LagrangianSystem& sys, double t,
                                          const Vec& q, const Vec& qdot_seed,
                                          double rank_tol) {
  const int n = sys.dim;
  const Mat W0 = velocity_hessian(sys, t, q, qdot_seed);
  const KernelSplit ks = split_by_rank(W0, rank_tol);

  // constant-rank check: 5 probe points per axis in q and qdot
  for (int axis = 0; axis < 2 * n; ++axis) {
    const bool in_q = axis < n;
    const int i = axis % n;
    const double h = fd_step(in_q ? q[i] : qdot_seed[i]);
    for (int s = -2; s <= 2; ++s) {
      if (s == 0) continue;
      Vec qq = q, vv = qdot_seed;
      (in_q ? qq[i] : vv[i]) += s * h * 10.0;
      const Mat Wp = velocity_hessian(sys, t, qq, vv);
      if (split_by_rank(Wp, rank_tol).rank != ks.rank)
        throw RankDrift("velocity-Hessian rank changes across probe neighborhood");
    }
  }

  const Mat range = ks.range;
  const Mat kernel = ks.kernel;
  const Vec seed = qdot_seed;
  LagrangianSystem sys_c = sys;

  ConstrainedHamiltonian ch;
  ch.dim = n;
  ch.hamiltonian = [sys_c, seed, range](double tt, const Vec& qq,
                                        const Vec& pp) -> double {
    const Vec qdot = solve_velocities(sys_c, tt, qq, pp, seed, range);
    return pp.dot(qdot) - eval_L(sys_c, tt, qq, qdot);
  };
  for (int a = 0; a < kernel.cols(); ++a) {
    const Vec u = kernel.col(a);
    Constraint c;
    c.kind = ConstraintKind::primary;
    c.fn = [sys_c, seed, range, u](double tt, const Vec& qq, const Vec& pp) -> double {
      const Vec qdot = solve_velocities(sys_c, tt, qq, pp, seed, range);
      return u.dot(pp - grad_qdot(sys_c, tt, qq, qdot));
    };
    ch.constraints.items.push_back(std::move(c));
  }
  return ch;
}

double poisson_bracket(const PhaseFn& f, const PhaseFn& g, double t, const Vec& q,
                       const Vec& p) {
  const Vec fq = phase_grad(f, t, q, p, true);
  const Vec fp = phase_grad(f, t, q, p, false);
  const Vec gq = phase_grad(g, t, q, p, true);
  const Vec gp = phase_grad(g, t, q, p, false);
  return fq.dot(gp) - fp.dot(gq);
}

PhaseVelocity constrained_rhs(const ConstrainedHamiltonian& ch, double t,
                              const Vec& q, const Vec& p,
                              const std::optional<Vec>& lambda) {
  const auto& cs = ch.constraints.items;
  if (!cs.empty() && !lambda)
    throw UnresolvedMultipliers("constraints present but no multipliers supplied");
  if (lambda && lambda->size() != static_cast<Eigen::Index>(cs.size()))
    throw UnresolvedMultipliers("multiplier vector size mismatch");
  PhaseVelocity out;
  out.qdot = phase_grad(ch.hamiltonian, t, q, p, false);
  out.pdot = -phase_grad(ch.hamiltonian, t, q, p, true);
  for (std::size_t a = 0; a < cs.size(); ++a) {
    const double la = (*lambda)[static_cast<Eigen::Index>(a)];
    out.qdot += la * phase_grad(cs[a].fn, t, q, p, false);
    out.pdot -= la * phase_grad(cs[a].fn, t, q, p, true);
  }
  return out;
}

ConsistencyResult consistency_resolve(const ConstrainedHamiltonian& ch, double t,
                                      const Vec& q, const Vec& p, double tol) {
  const auto& cs = ch.constraints.items;
  const int m = static_cast<int>(cs.size());
  ConsistencyResult res;
  res.lambdas = Vec::Zero(m);
  res.lambda_arbitrary.assign(m, false);
  if (m == 0) return res;

  Mat C = Mat::Zero(m, m);
  Vec b(m);
  for (int a = 0; a < m; ++a) {
    b(a) = poisson_bracket(cs[a].fn, ch.hamiltonian, t, q, p);
    for (int c = a + 1; c < m; ++c) {
      const double v = poisson_bracket(cs[a].fn, cs[c].fn, t, q, p);
      C(a, c) = v;
      C(c, a) = -v;
    }
  }

  Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++rank;

  // least-squares lambda on the regular subspace
  Vec z = svd.matrixU().transpose() * (-b);
  Vec y = Vec::Zero(m);
  for (int i = 0; i < rank; ++i) y(i) = z(i) / sv(i);
  res.lambdas = svd.matrixV() * y;

  const double b_thr = tol * std::max(1.0, b.norm()) + 1e-7;
  for (int kcol = rank; kcol < m; ++kcol) {
    const Vec u = svd.matrixV().col(kcol);
    // lambda is undetermined along ker C regardless
    for (int a = 0; a < m; ++a)
      if (std::abs(u(a)) > 1e-8) res.lambda_arbitrary[a] = true;
    const double beta = u.dot(b);
    if (std::abs(beta) > b_thr) {
      // non-trivial consistency condition: u_a [phi^a, H] ~ 0 is a new constraint
      std::vector<PhaseFn> fns;
      fns.reserve(cs.size());
      for (const auto& c : cs) fns.push_back(c.fn);
      PhaseFn H = ch.hamiltonian;
      Constraint sec;
      sec.kind = ConstraintKind::secondary;
      sec.fn = [fns, H, u](double tt, const Vec& qq, const Vec& pp) -> double {
        double s = 0.0;
        for (std::size_t a = 0; a < fns.size(); ++a)
          s += u(static_cast<Eigen::Index>(a)) *
               poisson_bracket(fns[a], H, tt, qq, pp);
        return s;
      };
      res.new_constraints.push_back(std::move(sec));
    }
  }
  return res;
}

}  // namespace maxham::db
