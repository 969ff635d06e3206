// Flat-space E/B reference solver. Deliberately self-contained: the update
// loop below shares no evolution code with the canonical field path.
#include "maxham/verify.hpp"

#include <cmath>

namespace maxham::verify {

namespace {

constexpr double kFourPi = 4.0 * M_PI;

double central(const Field& f, int axis, int i, int j, int k) {
  const auto& g = f.grid();
  int o[3] = {0, 0, 0};
  o[axis] = 1;
  const double fp = f.pa(i + o[0], j + o[1], k + o[2]);
  const double fm = f.pa(i - o[0], j - o[1], k - o[2]);
  return (fp - fm) / (2.0 * g.dx[axis]);
}

Field3 curl(const Field3& F) {
  const GridSpec& g = F[0].grid();
  Field3 out{Field(g), Field(g), Field(g)};
  for_cells(g, [&](int i, int j, int k) {
    out[0].at(i, j, k) = central(F[2], 1, i, j, k) - central(F[1], 2, i, j, k);
    out[1].at(i, j, k) = central(F[0], 2, i, j, k) - central(F[2], 0, i, j, k);
    out[2].at(i, j, k) = central(F[1], 0, i, j, k) - central(F[0], 1, i, j, k);
  });
  return out;
}

void add_scaled(Field3& y, double a, const Field3& x) {
  for (int c = 0; c < 3; ++c) {
    auto& yd = y[c].data();
    const auto& xd = x[c].data();
    for (std::size_t m = 0; m < yd.size(); ++m) yd[m] += a * xd[m];
  }
}

}  // namespace

FdtdOracle::FdtdOracle(const EBState& init, CurrentSource src, Units u, double dt,
                       double cfl_limit)
    : src_(std::move(src)), units_(u), dt_(dt), time_(init.time), E_(init.E) {
  if (dt > cfl_limit * init.grid.min_dx() / u.c * (1.0 + 1e-12))
    throw CFLViolation("oracle dt exceeds CFL bound");
  // stagger B to t -/+ dt/2 with a half-step Taylor start
  const Field3 cE = curl(E_);
  B_half_ = init.B;
  B_half_prev_ = init.B;
  add_scaled(B_half_, -0.5 * dt_ * units_.c, cE);
  add_scaled(B_half_prev_, 0.5 * dt_ * units_.c, cE);
}

void FdtdOracle::step() {
  const double c = units_.c;
  const double tm = time_ + 0.5 * dt_;
  const Field3 cB = curl(B_half_);
  add_scaled(E_, c * dt_, cB);
  if (!src_.is_zero_hint) {
    const GridSpec& g = E_[0].grid();
    for_cells(g, [&](int i, int j, int k) {
      for (int a = 0; a < 3; ++a)
        E_[a].at(i, j, k) -= kFourPi * dt_ * src_.ji[a](tm, i, j, k);
    });
  }
  B_half_prev_ = B_half_;
  const Field3 cE = curl(E_);
  add_scaled(B_half_, -c * dt_, cE);
  time_ += dt_;
}

EBState FdtdOracle::current() const {
  EBState s;
  s.grid = E_[0].grid();
  s.time = time_;
  s.E = E_;
  for (int a = 0; a < 3; ++a) {
    s.B[a] = Field(s.grid);
    auto& bd = s.B[a].data();
    const auto& b0 = B_half_prev_[a].data();
    const auto& b1 = B_half_[a].data();
    for (std::size_t m = 0; m < bd.size(); ++m) bd[m] = 0.5 * (b0[m] + b1[m]);
  }
  return s;
}

double FdtdOracle::energy() const {
  const EBState s = current();
  double acc = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (double v : s.E[a].data()) acc += v * v;
    for (double v : s.B[a].data()) acc += v * v;
  }
  return acc * s.grid.cell_volume() / (2.0 * kFourPi);
}

}  // namespace maxham::verify
