#pragma once

#include <optional>
#include <string>
#include <vector>

#include "envlp/envelope_solver.hpp"
#include "envlp/error.hpp"
#include "envlp/periodic_signal.hpp"

namespace envlp {

struct SweepSpec {
  std::vector<int> L_values;
  std::vector<long> n_values;
  int grid_m = 8192;
  std::optional<double> c_override;
  CPrimeMode c_prime_mode = CPrimeMode::exact_postsolve;
};

struct SweepRow {
  int L = 0;
  long n = 0;
  std::optional<EnvelopeResult> result;
  std::string error;  ///< set when the pair failed

  bool ok() const { return result.has_value(); }
};

/**
 * One approximation per (L, n) pair, L-major and n-minor in the order given.
 * A failing pair is recorded in its row and the sweep continues. Within one
 * L the multipliers of the previous n seed the next solve when the grids nest.
 */
inline std::vector<SweepRow> run_sweep(const PeriodicSignal& signal, const SweepSpec& spec,
                                       const qp::QpOptions& qp_options = {}) {
  if (spec.L_values.empty() || spec.n_values.empty()) {
    throw Error(ErrorCode::InvalidArgument, "sweep needs at least one L and one n");
  }
  const PeriodicSignal sig =
      spec.c_override ? PeriodicSignal::from_samples(signal.samples(), spec.c_override)
                            .with_star_shaped(signal.star_shaped())
                      : signal;
  EnvelopeOptions opt;
  opt.c_prime_mode = spec.c_prime_mode;
  opt.grid_m = spec.grid_m;
  opt.qp = qp_options;

  std::vector<SweepRow> rows;
  for (int L : spec.L_values) {
    std::vector<double> last_lambda;
    long last_n = 0;
    for (long n : spec.n_values) {
      SweepRow row{L, n, std::nullopt, {}};
      try {
        const auto warm = prolong_multipliers(last_lambda, last_n, n);
        row.result = approximate(sig, L, n, opt, warm);
        last_lambda = row.result->solver.lambda;
        last_n = n;
      } catch (const Error& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace envlp
