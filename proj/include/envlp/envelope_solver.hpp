#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "envlp/error.hpp"
#include "envlp/fourier_envelope.hpp"
#include "envlp/periodic_signal.hpp"
#include "envlp/qp_solver.hpp"

namespace envlp {

inline constexpr long kMaxConstraints = 1'000'000;

enum class CPrimeMode { exact_postsolve, apriori };

inline constexpr std::string_view to_string(CPrimeMode m) {
  return m == CPrimeMode::exact_postsolve ? "exact_postsolve" : "apriori";
}

struct EnvelopeOptions {
  CPrimeMode c_prime_mode = CPrimeMode::exact_postsolve;
  int grid_m = 8192;  ///< verification grid for certify
  qp::QpOptions qp;
};

struct EnvelopeResult {
  FourierEnvelope appopt;
  FourierEnvelope subopt;
  long n = 0;
  int L = 0;
  double c = 0.0;
  double c_prime = 0.0;
  CPrimeMode c_prime_mode = CPrimeMode::exact_postsolve;
  double cost_appopt = 0.0;
  double cost_subopt = 0.0;
  double excess_energy = 0.0;  ///< cost_subopt minus signal energy
  double gap_bound = 0.0;
  bool certified = false;
  double min_margin = 0.0;
  qp::QpSolution solver;
};

/// Constraint rows at t = i/n and the diagonal energy weights [1, 2, ..., 2].
inline qp::QpProblem build_constraints(const PeriodicSignal& sig, int L, long n) {
  if (L < 0) throw Error(ErrorCode::InvalidArgument, "negative harmonic budget");
  if (L > kMaxHarmonics) {
    throw Error(ErrorCode::BudgetTooLarge,
                "L = " + std::to_string(L) + " exceeds " + std::to_string(kMaxHarmonics));
  }
  const long d = 2L * L + 1;
  if (n < d) {
    throw Error(ErrorCode::TooFewConstraints,
                "n = " + std::to_string(n) + " is below 2L+1 = " + std::to_string(d));
  }
  if (n > kMaxConstraints) throw Error(ErrorCode::InvalidArgument, "n exceeds 10^6");

  std::vector<double> q(d, 2.0);
  q[0] = 1.0;
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(n * d));
  std::vector<double> g(n);
  for (long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    const auto row = phasor_row(L, t);
    a.insert(a.end(), row.begin(), row.end());
    g[i] = sig.value_at(t);
  }
  return qp::QpProblem(std::move(q), std::move(a), std::move(g));
}

struct AppoptSolution {
  FourierEnvelope envelope;
  qp::QpSolution solver;
};

/// Minimum-energy degree-L envelope subject to the n point constraints.
inline AppoptSolution solve_appopt(const PeriodicSignal& sig, int L, long n,
                                   const qp::QpOptions& opt = {},
                                   std::span<const double> warm_lambda = {}) {
  const auto problem = build_constraints(sig, L, n);
  auto sol = qp::solve(problem, opt, warm_lambda);
  auto env = FourierEnvelope::from_params(sol.x);
  return {std::move(env), std::move(sol)};
}

/// Adds (c + c') / n to the DC coefficient.
inline FourierEnvelope lift_to_envelope(const FourierEnvelope& appopt, double c, double c_prime,
                                        long n) {
  if (c < 0.0 || c_prime < 0.0) throw Error(ErrorCode::InvalidArgument, "negative slope bound");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  return appopt.with_offset((c + c_prime) / static_cast<double>(n));
}

/// Cost increase of the lift, 2 b0 D + D^2 with D = (c + c') / n.
inline double gap_bound(const FourierEnvelope& appopt, double c, double c_prime, long n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
  const double delta = (c + c_prime) / static_cast<double>(n);
  return 2.0 * appopt.b0() * delta + delta * delta;
}

struct Certificate {
  bool certified = false;
  double min_margin = 0.0;
};

inline constexpr double kCertifyTolerance = 1e-9;

/// Smallest envelope-minus-signal margin over t = j / grid_m.
inline Certificate certify(const FourierEnvelope& env, const PeriodicSignal& sig,
                           int grid_m = 8192) {
  if (grid_m < 16) throw Error(ErrorCode::InvalidArgument, "verification grid must be >= 16");
  double margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid_m; ++j) {
    const double t = static_cast<double>(j) / grid_m;
    margin = std::min(margin, evaluate(env, t) - sig.value_at(t));
  }
  return {margin >= -kCertifyTolerance, margin};
}

inline EnvelopeResult approximate(const PeriodicSignal& sig, int L, long n,
                                  const EnvelopeOptions& opt = {},
                                  std::span<const double> warm_lambda = {}) {
  auto [appopt, solver] = solve_appopt(sig, L, n, opt.qp, warm_lambda);

  EnvelopeResult r;
  r.L = L;
  r.n = n;
  r.c = sig.lipschitz_c();
  r.c_prime_mode = opt.c_prime_mode;
  r.c_prime = opt.c_prime_mode == CPrimeMode::exact_postsolve
                  ? derivative_bound(appopt)
                  : apriori_derivative_bound(L, sig.sup_norm());
  r.subopt = lift_to_envelope(appopt, r.c, r.c_prime, n);
  r.cost_appopt = energy(appopt);
  r.cost_subopt = energy(r.subopt);
  r.excess_energy = r.cost_subopt - sig.signal_energy();
  r.gap_bound = gap_bound(appopt, r.c, r.c_prime, n);
  const auto cert = certify(r.subopt, sig, opt.grid_m);
  r.certified = cert.certified;
  r.min_margin = cert.min_margin;
  r.appopt = std::move(appopt);
  r.solver = std::move(solver);
  return r;
}

/// Maps multipliers from the n_from grid onto the nested n_to grid
/// (row i of the coarse grid is row i * n_to / n_from of the fine one).
/// Returns an empty vector when the grids are not nested.
inline std::vector<double> prolong_multipliers(std::span<const double> lambda, long n_from,
                                               long n_to) {
  if (n_from < 1 || n_to < n_from || n_to % n_from != 0 ||
      lambda.size() != static_cast<std::size_t>(n_from)) {
    return {};
  }
  const long stride = n_to / n_from;
  std::vector<double> out(n_to, 0.0);
  for (long i = 0; i < n_from; ++i) out[i * stride] = lambda[i];
  return out;
}

/// Dense-grid solve used as a stand-in for the semi-infinite optimum.
inline FourierEnvelope fine_grid_opt(const PeriodicSignal& sig, int L, long n_fine = 4096,
                                     const qp::QpOptions& opt = {}) {
  return solve_appopt(sig, L, n_fine, opt).envelope;
}

}  // namespace envlp
