#ifndef MAXHAM_DIRAC_BERGMANN_HPP
#define MAXHAM_DIRAC_BERGMANN_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxham::db {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// L(t, q, qdot)
using LagrangianFn = std::function<double(double, const Vec&, const Vec&)>;
// f(t, q, p)
using PhaseFn = std::function<double(double, const Vec&, const Vec&)>;

struct EvaluationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NewtonDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RankDrift : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnresolvedMultipliers : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LagrangianSystem {
  int dim = 0;
  LagrangianFn lagrangian;
};

enum class ConstraintKind { primary, secondary };

struct Constraint {
  PhaseFn fn;
  ConstraintKind kind = ConstraintKind::primary;
};

struct ConstraintSet {
  std::vector<Constraint> items;
  double tolerance = 1e-8;

  bool on_surface(double t, const Vec& q, const Vec& p) const {
    for (const auto& c : items)
      if (std::abs(c.fn(t, q, p)) > tolerance) return false;
    return true;
  }
};

struct ConstrainedHamiltonian {
  int dim = 0;
  PhaseFn hamiltonian;
  ConstraintSet constraints;
};

// Central-difference step per the differentiation contract.
double fd_step(double x);

// W_ij = d^2 L / dqdot_i dqdot_j, central differences, symmetrized.
Mat velocity_hessian(const LagrangianSystem& sys, double t, const Vec& q,
                     const Vec& qdot);

struct SingularityReport {
  int rank = 0;
  bool is_singular = false;
  Mat null_basis;  // columns span ker W, orthonormal
};

SingularityReport singularity_report(const Mat& W, double tol);

// Canonical momenta p_i = dL/dqdot_i, with velocities on the regular subspace eliminated by a
// damped Newton solve; each kernel direction of W becomes a primary
// constraint. Default rank tolerance absorbs finite-difference noise in W.
ConstrainedHamiltonian legendre_transform(const LagrangianSystem& sys, double t,
                                          const Vec& q, const Vec& qdot_seed,
                                          double rank_tol = 1e-4);

double poisson_bracket(const PhaseFn& f, const PhaseFn& g, double t, const Vec& q,
                       const Vec& p);

struct PhaseVelocity {
  Vec qdot;
  Vec pdot;
};

// Constrained Hamilton vector field: qdot = dH/dp + lambda_a dphi^a/dp,
// pdot = -dH/dq - lambda_a dphi^a/dq. Throws UnresolvedMultipliers when
// constraints exist and no lambda is supplied.
PhaseVelocity constrained_rhs(const ConstrainedHamiltonian& ch, double t,
                              const Vec& q, const Vec& p,
                              const std::optional<Vec>& lambda = std::nullopt);

struct ConsistencyResult {
  Vec lambdas;                           // least-squares solution of C lambda = -[phi,H]
  std::vector<bool> lambda_arbitrary;    // per constraint: lies in ker C (first class)
  std::vector<Constraint> new_constraints;  // secondary constraints emitted
};

// Dirac consistency phidot^a = [phi^a,H] + lambda_b [phi^a,phi^b] ~ 0.
// Kernel directions of C with non-vanishing [phi,H] emit secondary
// constraints; directions with vanishing [phi,H] leave lambda arbitrary.
ConsistencyResult consistency_resolve(const ConstrainedHamiltonian& ch, double t,
                                      const Vec& q, const Vec& p, double tol);

}  // namespace maxham::db

#endif
