#include "dpsyn/solver/conic_ipm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dpsyn::solver {

namespace {

struct SparseRow {
  std::vector<std::pair<int, double>> terms;
};

// Largest step to the boundary of the nonnegative orthant / second-order
// cone from interior point u along direction d.
double orthant_max_step(const Eigen::VectorXd& u, const Eigen::VectorXd& d, int off, int len) {
  double alpha = kInf;
  for (int i = 0; i < len; ++i) {
    if (d[off + i] < 0.0) alpha = std::min(alpha, -u[off + i] / d[off + i]);
  }
  return alpha;
}

double soc_max_step(const Eigen::VectorXd& u, const Eigen::VectorXd& d, int off, int len) {
  const double u0 = u[off], d0 = d[off];
  double u1u1 = 0.0, d1d1 = 0.0, u1d1 = 0.0;
  for (int i = 1; i < len; ++i) {
    u1u1 += u[off + i] * u[off + i];
    d1d1 += d[off + i] * d[off + i];
    u1d1 += u[off + i] * d[off + i];
  }
  const double a = d0 * d0 - d1d1;
  const double b = 2.0 * (u0 * d0 - u1d1);
  const double c = u0 * u0 - u1u1;  // > 0 strictly inside
  double alpha = kInf;
  if (std::abs(a) < 1e-300) {
    if (b < 0.0) alpha = -c / b;
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double r1 = (-b - sq) / (2.0 * a);
      const double r2 = (-b + sq) / (2.0 * a);
      if (r1 > 0.0) alpha = std::min(alpha, r1);
      if (r2 > 0.0) alpha = std::min(alpha, r2);
    }
  }
  if (d0 < 0.0) {
    const double lin = -u0 / d0;
    if (lin > 0.0) alpha = std::min(alpha, lin);
  }
  return alpha;
}

class ConicSolver {
 public:
  explicit ConicSolver(const ConicProgram& cp) : cp_(cp) { build(); }
  SolveOutcome run();

 private:
  struct SocScaling {
    Eigen::VectorXd wbar;
    double eta = 1.0;
  };

  void build();
  void compute_scaling();
  void identity_scaling();
  void assemble_and_factor();
  void kkt_solve(const Eigen::VectorXd& rhs1, const Eigen::VectorXd& rhs2, Eigen::VectorXd& dx,
                 Eigen::VectorXd& dy) const;
  void newton(const Eigen::VectorXd& rx, const Eigen::VectorXd& ry, const Eigen::VectorXd& rz,
              const Eigen::VectorXd& psi, Eigen::VectorXd& dx, Eigen::VectorXd& dy,
              Eigen::VectorXd& dz, Eigen::VectorXd& ds) const;

  Eigen::VectorXd mul_g(const Eigen::VectorXd& x) const;
  Eigen::VectorXd mul_gt(const Eigen::VectorXd& u) const;
  void mul_w(Eigen::VectorXd& u) const;
  void mul_winv(Eigen::VectorXd& u) const;
  Eigen::VectorXd jordan_mul(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  Eigen::VectorXd jordan_div(const Eigen::VectorXd& lambda, const Eigen::VectorXd& v) const;
  Eigen::VectorXd cone_identity() const;
  double max_step(const Eigen::VectorXd& u, const Eigen::VectorXd& d) const;
  void shift_into_cone(Eigen::VectorXd& u) const;

  const ConicProgram& cp_;
  int n_ = 0;       // variables
  int p_ = 0;       // equality rows
  int l_ = 0;       // orthant dimension
  int total_ = 0;   // full cone dimension
  int degree_ = 0;  // l + number of SOC blocks

  std::vector<SparseRow> g_rows_;
  Eigen::VectorXd h_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::VectorXd c_;
  std::vector<std::pair<int, int>> soc_blocks_;  // (offset, length)
  std::vector<Eigen::MatrixXd> soc_gjg_;

  // per-iteration scaling + factorization
  Eigen::VectorXd orthant_w2_;  // w_i^2 = s_i / z_i
  std::vector<SocScaling> soc_scaling_;
  Eigen::LLT<Eigen::MatrixXd> h_llt_;
  Eigen::MatrixXd hi_at_;
  Eigen::LDLT<Eigen::MatrixXd> schur_;

  // iterates
  Eigen::VectorXd x_, y_, s_, z_;
  Eigen::VectorXd lambda_cache_;  // scaled point W z == W^{-1} s
};

void ConicSolver::build() {
  cp_.core.validate();
  n_ = cp_.core.num_vars();
  c_ = Eigen::Map<const Eigen::VectorXd>(cp_.core.objective.data(), n_);

  std::vector<double> h;
  std::vector<double> b;
  std::vector<std::vector<std::pair<int, double>>> a_rows;

  auto push_ineq = [&](const LinExpr& expr, double rhs, double sign) {
    // sign * expr <= sign * rhs becomes a G row.
    SparseRow row;
    for (const auto& [j, ce] : expr.terms) row.terms.emplace_back(j, sign * ce);
    g_rows_.push_back(std::move(row));
    h.push_back(sign * (rhs - expr.constant));
  };

  for (const auto& row : cp_.core.rows) {
    switch (row.sense) {
      case RowSense::LessEqual:
        push_ineq(row.expr, row.rhs, 1.0);
        break;
      case RowSense::GreaterEqual:
        push_ineq(row.expr, row.rhs, -1.0);
        break;
      case RowSense::Equal: {
        std::vector<std::pair<int, double>> ar(row.expr.terms.begin(), row.expr.terms.end());
        a_rows.push_back(std::move(ar));
        b.push_back(row.rhs - row.expr.constant);
        break;
      }
    }
  }
  for (int j = 0; j < n_; ++j) {
    if (cp_.core.lower[j] == cp_.core.upper[j]) {
      a_rows.push_back({{j, 1.0}});
      b.push_back(cp_.core.lower[j]);
      continue;
    }
    if (cp_.core.lower[j] > -kInf) {
      SparseRow row;
      row.terms.emplace_back(j, -1.0);
      g_rows_.push_back(std::move(row));
      h.push_back(-cp_.core.lower[j]);
    }
    if (cp_.core.upper[j] < kInf) {
      SparseRow row;
      row.terms.emplace_back(j, 1.0);
      g_rows_.push_back(std::move(row));
      h.push_back(cp_.core.upper[j]);
    }
  }
  l_ = static_cast<int>(g_rows_.size());

  for (const auto& cone : cp_.cones) {
    if (cone.t_var < 0 || cone.t_var >= n_) throw std::invalid_argument("cone references unknown variable");
    const int off = static_cast<int>(g_rows_.size());
    SparseRow top;
    top.terms.emplace_back(cone.t_var, -1.0);
    g_rows_.push_back(std::move(top));
    h.push_back(0.0);
    for (const auto& expr : cone.rows) {
      SparseRow row;
      for (const auto& [j, ce] : expr.terms) row.terms.emplace_back(j, -ce);
      g_rows_.push_back(std::move(row));
      h.push_back(expr.constant);
    }
    soc_blocks_.emplace_back(off, static_cast<int>(cone.rows.size()) + 1);
  }

  total_ = static_cast<int>(g_rows_.size());
  degree_ = l_ + static_cast<int>(soc_blocks_.size());
  if (total_ == 0) throw std::invalid_argument("conic solver requires at least one inequality or cone");
  h_ = Eigen::Map<Eigen::VectorXd>(h.data(), total_);

  p_ = static_cast<int>(a_rows.size());
  a_ = Eigen::MatrixXd::Zero(p_, n_);
  b_ = Eigen::VectorXd::Zero(p_);
  for (int i = 0; i < p_; ++i) {
    for (const auto& [j, ce] : a_rows[i]) a_(i, j) += ce;
    b_[i] = b[i];
  }

  // G'JG per SOC block is scaling-independent; precompute once.
  soc_gjg_.reserve(soc_blocks_.size());
  for (const auto& [off, len] : soc_blocks_) {
    Eigen::MatrixXd gjg = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < len; ++i) {
      const double sign = (i == 0) ? 1.0 : -1.0;
      const auto& row = g_rows_[off + i];
      for (const auto& [j1, c1] : row.terms) {
        for (const auto& [j2, c2] : row.terms) gjg(j1, j2) += sign * c1 * c2;
      }
    }
    soc_gjg_.push_back(std::move(gjg));
  }
}

Eigen::VectorXd ConicSolver::mul_g(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(total_);
  for (int i = 0; i < total_; ++i) {
    double v = 0.0;
    for (const auto& [j, ce] : g_rows_[i].terms) v += ce * x[j];
    out[i] = v;
  }
  return out;
}

Eigen::VectorXd ConicSolver::mul_gt(const Eigen::VectorXd& u) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
  for (int i = 0; i < total_; ++i) {
    const double ui = u[i];
    if (ui == 0.0) continue;
    for (const auto& [j, ce] : g_rows_[i].terms) out[j] += ce * ui;
  }
  return out;
}

void ConicSolver::identity_scaling() {
  orthant_w2_ = Eigen::VectorXd::Ones(l_);
  soc_scaling_.assign(soc_blocks_.size(), SocScaling{});
  for (std::size_t k = 0; k < soc_blocks_.size(); ++k) {
    soc_scaling_[k].wbar = Eigen::VectorXd::Zero(soc_blocks_[k].second);
    soc_scaling_[k].wbar[0] = 1.0;
    soc_scaling_[k].eta = 1.0;
  }
}

void ConicSolver::compute_scaling() {
  orthant_w2_.resize(l_);
  for (int i = 0; i < l_; ++i) orthant_w2_[i] = s_[i] / z_[i];
  soc_scaling_.resize(soc_blocks_.size());
  for (std::size_t k = 0; k < soc_blocks_.size(); ++k) {
    const auto [off, len] = soc_blocks_[k];
    const auto s = s_.segment(off, len);
    const auto z = z_.segment(off, len);
    const double gs = std::sqrt(s[0] * s[0] - s.tail(len - 1).squaredNorm());
    const double gz = std::sqrt(z[0] * z[0] - z.tail(len - 1).squaredNorm());
    const Eigen::VectorXd sb = s / gs;
    const Eigen::VectorXd zb = z / gz;
    const double cc = std::sqrt((1.0 + sb.dot(zb)) / 2.0);
    Eigen::VectorXd wbar(len);
    wbar[0] = (sb[0] + zb[0]) / (2.0 * cc);
    wbar.tail(len - 1) = (sb.tail(len - 1) - zb.tail(len - 1)) / (2.0 * cc);
    soc_scaling_[k].wbar = std::move(wbar);
    soc_scaling_[k].eta = std::sqrt(gs / gz);
  }
}

// W u: orthant u_i *= w_i. SOC block (arrow plus rank-one form):
//   (W u)_0 = eta (w0 u0 + w1'u1)
//   (W u)_1 = eta (u1 + (u0 + w1'u1 / (1 + w0)) w1).
void ConicSolver::mul_w(Eigen::VectorXd& u) const {
  for (int i = 0; i < l_; ++i) u[i] *= std::sqrt(orthant_w2_[i]);
  for (std::size_t k = 0; k < soc_blocks_.size(); ++k) {
    const auto [off, len] = soc_blocks_[k];
    const auto& sc = soc_scaling_[k];
    auto seg = u.segment(off, len);
    const double w0 = sc.wbar[0];
    const auto w1 = sc.wbar.tail(len - 1);
    const double u0 = seg[0];
    const double d = w1.dot(seg.tail(len - 1));
    seg.tail(len - 1) += (u0 + d / (1.0 + w0)) * w1;
    seg[0] = w0 * u0 + d;
    seg *= sc.eta;
  }
}

// W^{-1} u: same form with wbar replaced by J wbar and eta inverted.
void ConicSolver::mul_winv(Eigen::VectorXd& u) const {
  for (int i = 0; i < l_; ++i) u[i] /= std::sqrt(orthant_w2_[i]);
  for (std::size_t k = 0; k < soc_blocks_.size(); ++k) {
    const auto [off, len] = soc_blocks_[k];
    const auto& sc = soc_scaling_[k];
    auto seg = u.segment(off, len);
    const double w0 = sc.wbar[0];
    const auto w1 = sc.wbar.tail(len - 1);
    const double u0 = seg[0];
    const double d = w1.dot(seg.tail(len - 1));
    seg.tail(len - 1) += (-u0 + d / (1.0 + w0)) * w1;
    seg[0] = w0 * u0 - d;
    seg /= sc.eta;
  }
}

Eigen::VectorXd ConicSolver::jordan_mul(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  Eigen::VectorXd out(total_);
  for (int i = 0; i < l_; ++i) out[i] = a[i] * b[i];
  for (const auto& [off, len] : soc_blocks_) {
    const auto av = a.segment(off, len);
    const auto bv = b.segment(off, len);
    out[off] = av.dot(bv);
    out.segment(off + 1, len - 1) = av[0] * bv.tail(len - 1) + bv[0] * av.tail(len - 1);
  }
  return out;
}

Eigen::VectorXd ConicSolver::jordan_div(const Eigen::VectorXd& lambda, const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(total_);
  for (int i = 0; i < l_; ++i) out[i] = v[i] / lambda[i];
  for (const auto& [off, len] : soc_blocks_) {
    const auto lv = lambda.segment(off, len);
    const auto vv = v.segment(off, len);
    const double a = lv[0] * lv[0] - lv.tail(len - 1).squaredNorm();
    const double u0 = (lv[0] * vv[0] - lv.tail(len - 1).dot(vv.tail(len - 1))) / a;
    out[off] = u0;
    out.segment(off + 1, len - 1) = (vv.tail(len - 1) - u0 * lv.tail(len - 1)) / lv[0];
  }
  return out;
}

Eigen::VectorXd ConicSolver::cone_identity() const {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(total_);
  for (int i = 0; i < l_; ++i) e[i] = 1.0;
  for (const auto& [off, len] : soc_blocks_) e[off] = 1.0;
  return e;
}

double ConicSolver::max_step(const Eigen::VectorXd& u, const Eigen::VectorXd& d) const {
  double alpha = orthant_max_step(u, d, 0, l_);
  for (const auto& [off, len] : soc_blocks_) alpha = std::min(alpha, soc_max_step(u, d, off, len));
  return alpha;
}

void ConicSolver::shift_into_cone(Eigen::VectorXd& u) const {
  double alpha = -kInf;
  for (int i = 0; i < l_; ++i) alpha = std::max(alpha, -u[i]);
  for (const auto& [off, len] : soc_blocks_) {
    alpha = std::max(alpha, u.segment(off + 1, len - 1).norm() - u[off]);
  }
  if (alpha >= -1e-8) {
    const Eigen::VectorXd e = cone_identity();
    u += (1.0 + alpha) * e;
  }
}

void ConicSolver::assemble_and_factor() {
  Eigen::MatrixXd hmat = Eigen::MatrixXd::Zero(n_, n_);
  // Orthant rows: weight 1 / w_i^2.
  for (int i = 0; i < l_; ++i) {
    const double w = 1.0 / orthant_w2_[i];
    const auto& row = g_rows_[i];
    for (const auto& [j1, c1] : row.terms) {
      for (const auto& [j2, c2] : row.terms) hmat(j1, j2) += w * c1 * c2;
    }
  }
  // SOC blocks: W^{-2} = eta^{-2} (2 v v' - J) with v = J wbar, so
  // G'W^{-2}G = eta^{-2} (2 a a' - G'JG) with a = G'v.
  for (std::size_t k = 0; k < soc_blocks_.size(); ++k) {
    const auto [off, len] = soc_blocks_[k];
    const auto& sc = soc_scaling_[k];
    Eigen::VectorXd v = -sc.wbar;
    v[0] = sc.wbar[0];
    Eigen::VectorXd av = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < len; ++i) {
      const auto& row = g_rows_[off + i];
      for (const auto& [j, ce] : row.terms) av[j] += ce * v[i];
    }
    const double inv_eta2 = 1.0 / (sc.eta * sc.eta);
    hmat += inv_eta2 * (2.0 * (av * av.transpose()) - soc_gjg_[k]);
  }

  double reg = 1e-13 * (1.0 + hmat.diagonal().maxCoeff());
  for (int attempt = 0; attempt < 6; ++attempt) {
    Eigen::MatrixXd hr = hmat;
    hr.diagonal().array() += reg;
    h_llt_.compute(hr);
    if (h_llt_.info() == Eigen::Success) break;
    reg *= 100.0;
  }
  if (h_llt_.info() != Eigen::Success) throw std::runtime_error("conic KKT factorization failed");

  if (p_ > 0) {
    hi_at_ = h_llt_.solve(a_.transpose());
    schur_.compute(a_ * hi_at_);
  }
}

void ConicSolver::kkt_solve(const Eigen::VectorXd& rhs1, const Eigen::VectorXd& rhs2,
                            Eigen::VectorXd& dx, Eigen::VectorXd& dy) const {
  auto solve_once = [&](const Eigen::VectorXd& r1, const Eigen::VectorXd& r2, Eigen::VectorXd& ox,
                        Eigen::VectorXd& oy) {
    if (p_ > 0) {
      const Eigen::VectorXd hi_r1 = h_llt_.solve(r1);
      oy = schur_.solve(a_ * hi_r1 - r2);
      ox = hi_r1 - hi_at_ * oy;
    } else {
      oy.resize(0);
      ox = h_llt_.solve(r1);
    }
  };
  solve_once(rhs1, rhs2, dx, dy);
  // One round of iterative refinement keeps the Newton residual small when
  // the scaling becomes ill-conditioned near the solution.
  Eigen::VectorXd hx = h_llt_.matrixL() * (h_llt_.matrixL().transpose() * dx);
  Eigen::VectorXd res1 = rhs1 - hx;
  if (p_ > 0) res1 -= a_.transpose() * dy;
  Eigen::VectorXd res2 = (p_ > 0) ? Eigen::VectorXd(rhs2 - a_ * dx) : Eigen::VectorXd();
  Eigen::VectorXd cx, cy;
  solve_once(res1, (p_ > 0) ? res2 : Eigen::VectorXd::Zero(0), cx, cy);
  dx += cx;
  if (p_ > 0) dy += cy;
}

void ConicSolver::newton(const Eigen::VectorXd& rx, const Eigen::VectorXd& ry,
                         const Eigen::VectorXd& rz, const Eigen::VectorXd& psi,
                         Eigen::VectorXd& dx, Eigen::VectorXd& dy, Eigen::VectorXd& dz,
                         Eigen::VectorXd& ds) const {
  const Eigen::VectorXd lambda_div = jordan_div(/*lambda=*/lambda_cache_, psi);
  Eigen::VectorXd u_pre = rz;
  mul_winv(u_pre);
  u_pre -= lambda_div;
  Eigen::VectorXd u = u_pre;
  mul_winv(u);
  const Eigen::VectorXd rhs1 = -rx - mul_gt(u);
  kkt_solve(rhs1, -ry, dx, dy);
  Eigen::VectorXd gdx = mul_g(dx);
  dz = gdx;
  mul_winv(dz);
  dz += u_pre;
  mul_winv(dz);
  ds = -rz - gdx;
}

SolveOutcome ConicSolver::run() {
  SolveOutcome out;

  // Initial point from two least-squares KKT solves with identity scaling.
  identity_scaling();
  assemble_and_factor();
  {
    Eigen::VectorXd dy;
    kkt_solve(mul_gt(h_), b_, x_, dy);
    s_ = h_ - mul_g(x_);
    shift_into_cone(s_);

    Eigen::VectorXd dx;
    kkt_solve(-c_, Eigen::VectorXd::Zero(p_), dx, y_);
    z_ = mul_g(dx);
    shift_into_cone(z_);
  }

  const double feastol = 1e-8;
  const double reltol = 1e-8;
  const int max_iters = 100;
  const double bnorm = std::max(1.0, b_.norm());
  const double hnorm = std::max(1.0, h_.norm());
  const double cnorm = std::max(1.0, c_.norm());

  double best_metric = kInf;
  Eigen::VectorXd best_x = x_;
  double best_gap = kInf, best_pres = kInf, best_dres = kInf;
  bool converged = false;
  int iter = 0;

  for (; iter < max_iters; ++iter) {
    const Eigen::VectorXd rx = c_ + a_.transpose() * y_ + mul_gt(z_);
    const Eigen::VectorXd ry = a_ * x_ - b_;
    const Eigen::VectorXd rz = mul_g(x_) + s_ - h_;
    const double gap = s_.dot(z_);
    const double pcost = c_.dot(x_);
    const double pres = std::max(ry.norm() / bnorm, rz.norm() / hnorm);
    const double dres = rx.norm() / cnorm;
    const double relgap = gap / std::max(1.0, std::abs(pcost));

    // Numerical breakdown past machine precision: keep the best iterate.
    if (!std::isfinite(gap) || !std::isfinite(pres) || !std::isfinite(dres) || gap <= 0.0) break;

    const double metric = std::max({pres, dres, relgap});
    if (std::isfinite(metric) && metric < best_metric) {
      best_metric = metric;
      best_x = x_;
      best_gap = gap;
      best_pres = pres;
      best_dres = dres;
    }
    if (pres <= feastol && dres <= feastol && relgap <= reltol) {
      converged = true;
      break;
    }

    compute_scaling();
    assemble_and_factor();
    lambda_cache_ = z_;
    mul_w(lambda_cache_);

    const double mu = gap / degree_;

    // Affine (predictor) direction.
    Eigen::VectorXd dx_a, dy_a, dz_a, ds_a;
    newton(rx, ry, rz, jordan_mul(lambda_cache_, lambda_cache_), dx_a, dy_a, dz_a, ds_a);
    const double alpha_aff = std::min({1.0, max_step(s_, ds_a), max_step(z_, dz_a)});
    const double gap_aff = (s_ + alpha_aff * ds_a).dot(z_ + alpha_aff * dz_a);
    double sigma = std::pow(std::max(gap_aff, 0.0) / gap, 3.0);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Combined (corrector) direction.
    Eigen::VectorXd ws = ds_a;
    mul_winv(ws);
    Eigen::VectorXd wz = dz_a;
    mul_w(wz);
    Eigen::VectorXd psi = jordan_mul(lambda_cache_, lambda_cache_) + jordan_mul(ws, wz) -
                          sigma * mu * cone_identity();
    Eigen::VectorXd dx, dy, dz, ds;
    newton(rx, ry, rz, psi, dx, dy, dz, ds);

    const double alpha = std::min(1.0, 0.99 * std::min(max_step(s_, ds), max_step(z_, dz)));
    if (!(alpha > 0.0) || !std::isfinite(alpha)) break;
    x_ += alpha * dx;
    if (p_ > 0) y_ += alpha * dy;
    s_ += alpha * ds;
    z_ += alpha * dz;
  }

  out.iterations = iter;
  out.x = best_x;
  out.objective = c_.dot(best_x);

  // Residuals against the original statement.
  double primal = 0.0;
  for (const auto& row : cp_.core.rows) {
    const double v = row.expr.eval(best_x);
    switch (row.sense) {
      case RowSense::LessEqual: primal = std::max(primal, v - row.rhs); break;
      case RowSense::GreaterEqual: primal = std::max(primal, row.rhs - v); break;
      case RowSense::Equal: primal = std::max(primal, std::abs(v - row.rhs)); break;
    }
  }
  for (int j = 0; j < n_; ++j) {
    if (cp_.core.lower[j] > -kInf) primal = std::max(primal, cp_.core.lower[j] - best_x[j]);
    if (cp_.core.upper[j] < kInf) primal = std::max(primal, best_x[j] - cp_.core.upper[j]);
  }
  double cone_res = 0.0;
  for (const auto& cone : cp_.cones) {
    double nrm = 0.0;
    for (const auto& expr : cone.rows) {
      const double v = expr.eval(best_x);
      nrm += v * v;
    }
    cone_res = std::max(cone_res, std::sqrt(nrm) - best_x[cone.t_var]);
  }
  out.residuals.primal = std::max(primal, 0.0);
  out.residuals.cone = std::max(cone_res, 0.0);
  out.residuals.dual = best_dres;
  out.residuals.gap = best_gap;

  // Stalled-but-accurate iterates (all residuals within 1e-4) are still
  // accepted: downstream consumers work at 1e-4 tolerances.
  if (converged || best_metric <= 1e-4) {
    out.status = SolveStatus::Optimal;
  } else {
    out.status = SolveStatus::Limit;
    out.message = "interior-point method did not reach tolerance";
  }
  return out;
}

}  // namespace

SolveOutcome conic_solve(const ConicProgram& cp) {
  ConicSolver solver(cp);
  return solver.run();
}

}  // namespace dpsyn::solver
