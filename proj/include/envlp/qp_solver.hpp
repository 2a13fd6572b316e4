#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "envlp/error.hpp"

namespace envlp::qp {

/**
 * Strictly convex QP with diagonal Hessian and inequality constraints:
 *
 *   minimize  x' diag(q) x   subject to  A x >= g.
 *
 * A is stored row-major, one row per constraint.
 */
class QpProblem {
 public:
  QpProblem(std::vector<double> q_diag, std::vector<double> a_row_major, std::vector<double> g)
      : q_(std::move(q_diag)), a_(std::move(a_row_major)), g_(std::move(g)) {
    if (q_.empty()) throw Error(ErrorCode::DimensionMismatch, "empty Hessian diagonal");
    for (double q : q_) {
      if (!(q > 0.0) || !std::isfinite(q)) {
        throw Error(ErrorCode::InvalidArgument, "Hessian diagonal must be positive and finite");
      }
    }
    if (a_.size() != q_.size() * g_.size()) {
      throw Error(ErrorCode::DimensionMismatch, "constraint matrix has " + std::to_string(a_.size()) +
                                                    " entries, expected " +
                                                    std::to_string(q_.size() * g_.size()));
    }
  }

  QpProblem(std::vector<double> q_diag, const std::vector<std::vector<double>>& rows,
            std::vector<double> g)
      : QpProblem(q_diag, flatten(rows, q_diag.size()), std::move(g)) {}

  std::size_t dim() const noexcept { return q_.size(); }
  std::size_t constraints() const noexcept { return g_.size(); }
  const std::vector<double>& q_diag() const noexcept { return q_; }
  const std::vector<double>& g() const noexcept { return g_; }
  std::span<const double> row(std::size_t i) const {
    return {a_.data() + i * q_.size(), q_.size()};
  }

  double row_dot(std::size_t i, std::span<const double> x) const {
    const auto r = row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
    return s;
  }

 private:
  static std::vector<double> flatten(const std::vector<std::vector<double>>& rows, std::size_t d) {
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (const auto& r : rows) {
      if (r.size() != d) throw Error(ErrorCode::DimensionMismatch, "ragged constraint rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return flat;
  }

  std::vector<double> q_;
  std::vector<double> a_;
  std::vector<double> g_;
};

struct QpOptions {
  double tol_feas = 1e-9;
  double tol_stat = 1e-8;
  double tol_comp = 1e-8;
  long max_iter = 200000;  ///< coordinate sweeps
  /// Over-relaxation factor for the working-set sweeps, in (0, 2).
  double relaxation = 1.9;
  /// After each outer pass, try to finish exactly on the active set the
  /// sweeps have identified (accepted only if the full KKT check passes).
  bool polish = true;
};

struct KktResiduals {
  double primal_violation = 0.0;  ///< max(0, max_i g_i - (Ax)_i)
  double dual_violation = 0.0;    ///< max(0, -min_i lambda_i)
  double complementarity = 0.0;   ///< max_i |lambda_i ((Ax)_i - g_i)|
  double stationarity = 0.0;      ///< ||2 Q x - A' lambda||_inf
};

struct QpSolution {
  std::vector<double> x;
  std::vector<double> lambda;
  long iterations = 0;
  bool converged = false;
  double primal_violation = 0.0;
  double dual_violation = 0.0;
  double complementarity = 0.0;
  double stationarity = 0.0;
  double objective = 0.0;       ///< x' Q x
  double dual_objective = 0.0;  ///< g' lambda - x(lambda)' Q x(lambda)
};

/// Recomputes all four KKT residuals from (x, lambda) alone.
inline KktResiduals kkt_residuals(const QpProblem& p, std::span<const double> x,
                                  std::span<const double> lambda) {
  if (x.size() != p.dim() || lambda.size() != p.constraints()) {
    throw Error(ErrorCode::DimensionMismatch, "solution does not match problem dimensions");
  }
  KktResiduals r;
  std::vector<double> grad(p.dim());
  for (std::size_t j = 0; j < p.dim(); ++j) grad[j] = 2.0 * p.q_diag()[j] * x[j];
  for (std::size_t i = 0; i < p.constraints(); ++i) {
    const double slack = p.row_dot(i, x) - p.g()[i];
    r.primal_violation = std::max(r.primal_violation, -slack);
    r.dual_violation = std::max(r.dual_violation, -lambda[i]);
    r.complementarity = std::max(r.complementarity, std::abs(lambda[i] * slack));
    const auto a = p.row(i);
    for (std::size_t j = 0; j < p.dim(); ++j) grad[j] -= a[j] * lambda[i];
  }
  for (double v : grad) r.stationarity = std::max(r.stationarity, std::abs(v));
  return r;
}

inline KktResiduals kkt_residuals(const QpProblem& p, const QpSolution& s) {
  return kkt_residuals(p, s.x, s.lambda);
}

inline double primal_objective(const QpProblem& p, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t j = 0; j < p.dim(); ++j) s += p.q_diag()[j] * x[j] * x[j];
  return s;
}

namespace detail {

/// Multiplier state of the dual coordinate ascent: lambda and the primal point
/// x(lambda) = (1/2) Q^{-1} A' lambda that minimizes the Lagrangian.
class DualState {
 public:
  DualState(const QpProblem& p, std::span<const double> warm)
      : p_(p), inv_q_(p.dim()), curv_(p.constraints()),
        lambda_(p.constraints(), 0.0), x_(p.dim(), 0.0) {
    for (std::size_t j = 0; j < p.dim(); ++j) inv_q_[j] = 1.0 / p.q_diag()[j];
    for (std::size_t i = 0; i < p.constraints(); ++i) {
      const auto a = p.row(i);
      double h = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) h += a[j] * a[j] * inv_q_[j];
      curv_[i] = 0.5 * h;
    }
    if (!warm.empty()) {
      if (warm.size() != p.constraints()) {
        throw Error(ErrorCode::DimensionMismatch, "warm-start multipliers have wrong length");
      }
      for (std::size_t i = 0; i < warm.size(); ++i) lambda_[i] = std::max(0.0, warm[i]);
    }
    resync();
  }

  /// Exact maximization of the dual along coordinate i, projected onto lambda_i >= 0.
  /// omega = 1 is the exact step; omega in (1, 2) over-relaxes.
  void update(std::size_t i, double omega = 1.0) {
    if (curv_[i] == 0.0) return;
    const double residual = p_.g()[i] - p_.row_dot(i, x_);
    const double next = std::max(0.0, lambda_[i] + omega * residual / curv_[i]);
    const double delta = next - lambda_[i];
    if (delta == 0.0) return;
    lambda_[i] = next;
    const auto a = p_.row(i);
    for (std::size_t j = 0; j < x_.size(); ++j) x_[j] += 0.5 * delta * inv_q_[j] * a[j];
  }

  /// Rebuilds x from lambda to shed accumulated rounding drift.
  void resync() {
    std::fill(x_.begin(), x_.end(), 0.0);
    for (std::size_t i = 0; i < lambda_.size(); ++i) {
      if (lambda_[i] == 0.0) continue;
      const auto a = p_.row(i);
      for (std::size_t j = 0; j < x_.size(); ++j) x_[j] += lambda_[i] * a[j];
    }
    for (std::size_t j = 0; j < x_.size(); ++j) x_[j] *= 0.5 * inv_q_[j];
  }

  void assign(std::vector<double> lambda) {
    lambda_ = std::move(lambda);
    resync();
  }

  const std::vector<double>& lambda() const noexcept { return lambda_; }
  const std::vector<double>& x() const noexcept { return x_; }
  const std::vector<double>& inv_q() const noexcept { return inv_q_; }

 private:
  const QpProblem& p_;
  std::vector<double> inv_q_;
  std::vector<double> curv_;
  std::vector<double> lambda_;
  std::vector<double> x_;
};


/**
 * Equality-constrained finish on a guessed active set.
 *
 * Starting from the rows with positive multipliers (tightest first), solves
 * (1/2) A_S Q^{-1} A_S' mu = g_S by incremental Cholesky, skipping rows that
 * are linearly dependent on those already taken. Negative multipliers are
 * dropped and violated rows added for a bounded number of rounds. Returns
 * the full multiplier vector, or an empty vector if no clean set was found.
 */
inline std::vector<double> polish_active_set(const QpProblem& p, std::span<const double> inv_q,
                                             std::span<const double> lambda, double tol_feas) {
  const std::size_t n = p.constraints();
  const std::size_t d = p.dim();
  std::vector<double> x0(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (lambda[i] == 0.0) continue;
    const auto r = p.row(i);
    for (std::size_t j = 0; j < d; ++j) x0[j] += lambda[i] * r[j];
  }
  for (std::size_t j = 0; j < d; ++j) x0[j] *= 0.5 * inv_q[j];
  std::vector<std::size_t> set;
  std::vector<double> slack(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (lambda[i] > 0.0) set.push_back(i);
    slack[i] = p.row_dot(i, x0) - p.g()[i];
  }
  // Tightest rows first: early multipliers are spread thinly over whole
  // neighbourhoods, while slack already points at the contact rows. The
  // first round also rejects near-parallel rows so one neighbourhood cannot
  // fill the whole basis.
  std::stable_sort(set.begin(), set.end(),
                   [&](std::size_t a, std::size_t b) { return slack[a] < slack[b]; });

  auto gram = [&](std::size_t a, std::size_t b) {
    const auto ra = p.row(a);
    const auto rb = p.row(b);
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += ra[j] * rb[j] * inv_q[j];
    return 0.5 * s;
  };

  const std::size_t max_rounds = 4 * d + 8;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    // Incremental Cholesky H_S = R' R over an independent subset of `set`.
    std::vector<std::size_t> basis;
    std::vector<std::vector<double>> chol;  // row k holds R(0..k, k)
    for (std::size_t idx : set) {
      if (basis.size() == d) break;
      std::vector<double> col(basis.size() + 1);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        double v = gram(basis[k], idx);
        for (std::size_t m = 0; m < k; ++m) v -= chol[k][m] * col[m];
        col[k] = v / chol[k][k];
      }
      const double diag = gram(idx, idx);
      double pivot = diag;
      for (std::size_t k = 0; k < basis.size(); ++k) pivot -= col[k] * col[k];
      if (!(pivot > (round == 0 ? 1e-4 : 1e-12) * diag)) continue;
      col.back() = std::sqrt(pivot);
      basis.push_back(idx);
      chol.push_back(std::move(col));
    }
    const std::size_t m = basis.size();
    std::vector<double> mu(m);
    for (std::size_t k = 0; k < m; ++k) {  // R' y = g
      double v = p.g()[basis[k]];
      for (std::size_t j = 0; j < k; ++j) v -= chol[k][j] * mu[j];
      mu[k] = v / chol[k][k];
    }
    for (std::size_t k = m; k-- > 0;) {  // R mu = y
      double v = mu[k];
      for (std::size_t j = k + 1; j < m; ++j) v -= chol[j][k] * mu[j];
      mu[k] = v / chol[k][k];
    }

    auto most_negative = std::min_element(mu.begin(), mu.end());
    if (most_negative != mu.end() && *most_negative < 0.0) {
      const std::size_t drop = basis[static_cast<std::size_t>(most_negative - mu.begin())];
      std::vector<std::size_t> next;
      for (std::size_t k = 0; k < m; ++k) {
        if (basis[k] != drop) next.push_back(basis[k]);
      }
      set = std::move(next);
      continue;
    }

    std::vector<double> x(d, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      const auto r = p.row(basis[k]);
      for (std::size_t j = 0; j < d; ++j) x[j] += mu[k] * r[j];
    }
    for (std::size_t j = 0; j < d; ++j) x[j] *= 0.5 * inv_q[j];

    std::size_t worst = n;
    double worst_violation = 0.1 * tol_feas;
    for (std::size_t i = 0; i < n; ++i) {
      const double violation = p.g()[i] - p.row_dot(i, x);
      if (violation > worst_violation) {
        worst_violation = violation;
        worst = i;
      }
    }
    if (worst == n) {
      std::vector<double> full(n, 0.0);
      for (std::size_t k = 0; k < m; ++k) full[basis[k]] = mu[k];
      return full;
    }
    set = basis;
    set.push_back(worst);
  }
  return {};
}

}  // namespace detail

/**
 * Solves the QP by cyclic coordinate ascent on the dual (Hildreth's method).
 *
 * Every full sweep is followed by a from-scratch KKT check. Between full
 * sweeps the solver repeatedly sweeps only the working set (positive
 * multipliers plus nearly active rows), which is where the slow modes of
 * nearly parallel active constraints live. One sweep of either kind counts
 * as one iteration. With polishing enabled, each outer pass ends with an
 * exact solve on the multipliers' support, kept only if it is KKT-clean.
 *
 * On hitting max_iter the last iterate is returned with converged == false.
 */
inline QpSolution solve(const QpProblem& p, const QpOptions& opt = {},
                        std::span<const double> warm_lambda = {}) {
  if (p.constraints() == 0) throw Error(ErrorCode::DimensionMismatch, "no constraints");
  if (!(opt.relaxation > 0.0 && opt.relaxation < 2.0)) {
    throw Error(ErrorCode::InvalidArgument, "relaxation must lie in (0, 2)");
  }
  detail::DualState state(p, warm_lambda);
  const std::size_t n = p.constraints();

  auto converged = [&](const KktResiduals& r) {
    return r.primal_violation <= opt.tol_feas && r.dual_violation == 0.0 &&
           r.complementarity <= opt.tol_comp && r.stationarity <= opt.tol_stat;
  };

  long iter = 0;
  KktResiduals res = kkt_residuals(p, state.x(), state.lambda());
  bool done = converged(res);
  std::vector<std::size_t> working;
  working.reserve(n);

  while (!done && iter < opt.max_iter) {
    for (std::size_t i = 0; i < n; ++i) state.update(i);
    ++iter;
    state.resync();
    res = kkt_residuals(p, state.x(), state.lambda());
    if ((done = converged(res))) break;

    working.clear();
    const double near = std::max(1e3 * opt.tol_feas, 10.0 * res.primal_violation);
    for (std::size_t i = 0; i < n; ++i) {
      if (state.lambda()[i] > 0.0 || p.row_dot(i, state.x()) - p.g()[i] <= near) {
        working.push_back(i);
      }
    }
    if (working.empty() || working.size() == n) continue;

    // Inner sweeps until the working set itself is KKT-clean, doubling the
    // batch between checks so cheap problems stay cheap.
    long batch = 4;
    while (iter < opt.max_iter) {
      const long sweeps = std::min(batch, opt.max_iter - iter);
      for (long s = 0; s < sweeps; ++s) {
        for (std::size_t i : working) state.update(i, opt.relaxation);
      }
      iter += sweeps;
      state.resync();
      double viol = 0.0, comp = 0.0;
      for (std::size_t i : working) {
        const double slack = p.row_dot(i, state.x()) - p.g()[i];
        viol = std::max(viol, -slack);
        comp = std::max(comp, std::abs(state.lambda()[i] * slack));
      }
      if (viol <= 0.1 * opt.tol_feas && comp <= 0.1 * opt.tol_comp) break;
      batch = std::min<long>(batch * 2, 4096);
      if (opt.polish) break;
    }

    if (opt.polish) {
      auto polished = detail::polish_active_set(p, state.inv_q(), state.lambda(), opt.tol_feas);
      if (!polished.empty()) {
        const auto before = state.lambda();
        state.assign(std::move(polished));
        res = kkt_residuals(p, state.x(), state.lambda());
        if ((done = converged(res))) break;
        state.assign(before);
      }
    }
  }

  if (!done) {
    res = kkt_residuals(p, state.x(), state.lambda());
    done = converged(res);
  }

  QpSolution sol;
  sol.x = state.x();
  sol.lambda = state.lambda();
  sol.iterations = iter;
  sol.converged = done;
  sol.primal_violation = res.primal_violation;
  sol.dual_violation = res.dual_violation;
  sol.complementarity = res.complementarity;
  sol.stationarity = res.stationarity;
  sol.objective = primal_objective(p, sol.x);
  double gl = 0.0;
  for (std::size_t i = 0; i < n; ++i) gl += p.g()[i] * sol.lambda[i];
  sol.dual_objective = gl - sol.objective;
  return sol;
}

}  // namespace envlp::qp
