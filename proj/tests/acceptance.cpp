// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "envlp/envlp.hpp"
#include "oracles.hpp"

namespace {

using namespace envlp;
using Clock = std::chrono::steady_clock;

constexpr double kPi = std::numbers::pi;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Run {
  std::string label;
  PeriodicSignal signal;
  EnvelopeResult result;
};

struct FineSolve {
  PeriodicSignal signal;
  int L;
  long n;
  qp::QpSolution solver;
};

struct Suite {
  std::vector<Run> runs;         // every approximate() call
  std::vector<FineSolve> fine;   // every fine_grid_opt stand-in
  int failures = 0;

  const EnvelopeResult& approx(const std::string& label, const PeriodicSignal& sig, int L,
                               long n) {
    runs.push_back({label, sig, approximate(sig, L, n)});
    return runs.back().result;
  }

  double fine_cost(const PeriodicSignal& sig, int L, long n = 4096) {
    auto sol = solve_appopt(sig, L, n);
    fine.push_back({sig, L, n, sol.solver});
    return energy(sol.envelope);
  }

  void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] AC%-2d %-34s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

PeriodicSignal star_signal() {
  const auto contour = Contour::from_points(shapes::five_point_star());
  return radial_parametrize(contour, 1024);
}

std::vector<PeriodicSignal> random_signals(std::uint64_t seed, int count, int harmonics) {
  std::mt19937_64 rng(seed);
  std::vector<PeriodicSignal> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(
        PeriodicSignal::from_samples(oracle::random_smooth_samples(rng, 1024, harmonics, 1.0)));
  }
  return out;
}

void analytic_optimum(Suite& s) {
  const auto sig = PeriodicSignal::from_samples(oracle::cos_samples(1024));
  const auto opt = oracle::cos_envelope_optimum();
  const auto t0 = Clock::now();
  const auto& r = s.approx("cos L=1 n=64", sig, 1, 64);
  const double elapsed = seconds_since(t0);
  const double fine = s.fine_cost(sig, 1);

  const double e_cost = std::abs(r.cost_appopt - opt.cost);
  const double e_b0 = std::abs(r.appopt.b0() - opt.h0);
  const double e_re = std::abs(r.appopt.b_re()[0] - (0.5 + opt.h1));
  const double e_im = std::abs(r.appopt.b_im()[0]);
  const bool pass = std::abs(opt.cost - 1.0 / 3) < 1e-9 && e_cost <= 2e-3 && e_b0 <= 5e-3 &&
                    e_re <= 5e-3 && e_im <= 5e-3 && std::abs(fine - opt.cost) <= 2e-3 &&
                    elapsed < 1.0;
  s.report(1, "analytic optimum (cos, L=1, n=64)", pass,
           fmt("cost=%.10f |dcost|=%.1e |db|=(%.1e,%.1e,%.1e) fine=%.10f t=%.3fs", r.cost_appopt,
               e_cost, e_b0, e_re, e_im, fine, elapsed));
}

void dc_oracle(Suite& s) {
  const auto sigs = random_signals(2024, 20, 6);
  const long divisors[] = {4, 8, 16, 32, 64, 128, 256, 512, 1024};
  double worst = 0.0;
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    const long n = divisors[i % 9];
    const auto& r = s.approx("dc", sigs[i], 0, n);
    double grid_max = -1e300;
    for (long k = 0; k < n; ++k) grid_max = std::max(grid_max, sigs[i].samples()[k * (1024 / n)]);
    worst = std::max(worst, std::abs(r.appopt.b0() - grid_max));
  }
  const double elapsed = seconds_since(t0);
  s.report(2, "DC oracle (L=0, 20 signals)", worst <= 1e-9 && elapsed < 1.0,
           fmt("max|b0-max g|=%.2e t=%.3fs", worst, elapsed));
}

void sandwich(Suite& s) {
  const auto sigs = random_signals(4242, 10, 5);
  double worst_low = -1e300, worst_high = -1e300;
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    const int L = 1 + static_cast<int>(i % 3);
    const auto& r = s.approx("sandwich", sigs[i], L, 32);
    const double fine = s.fine_cost(sigs[i], L);
    worst_low = std::max(worst_low, r.cost_appopt - fine);
    worst_high = std::max(worst_high, fine - r.cost_subopt);
  }
  s.report(4, "sandwich appopt<=fine<=subopt", worst_low <= 1e-7 && worst_high <= 1e-7,
           fmt("max(appopt-fine)=%.2e max(fine-subopt)=%.2e", worst_low, worst_high));
}

void monotonicity(Suite& s) {
  auto sigs = random_signals(777, 10, 6);
  sigs.push_back(star_signal());
  double worst_drop = 0.0;
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    for (int L : {1, 2, 3}) {
      double prev = -1e300;
      for (long n : {8, 16, 32, 64, 128}) {
        const double cost = s.approx("chain", sigs[i], L, n).cost_appopt;
        worst_drop = std::max(worst_drop, prev - cost);
        prev = cost;
      }
    }
  }
  s.report(5, "nested-grid monotonicity", worst_drop <= 1e-8,
           fmt("11 signals x L=1..3, largest decrease=%.2e", worst_drop));
}

void plateau(Suite& s) {
  const auto t0 = Clock::now();
  const auto sig = star_signal();
  std::vector<long> ns;
  std::vector<double> costs;
  for (long n = 16; n <= 1024; n *= 2) {
    ns.push_back(n);
    costs.push_back(s.approx("star plateau", sig, 1, n).cost_appopt);
  }
  const double elapsed = seconds_since(t0);
  double worst = 0.0;
  long holds_from = 0;  // smallest n from which every later doubling is within 1%
  for (std::size_t i = 0; i + 1 < costs.size(); ++i) {
    const double change = std::abs(costs[i + 1] - costs[i]) / costs[i];
    worst = std::max(worst, change);
    if (change >= 0.01) holds_from = ns[i + 1];
  }
  std::string trail;
  for (double c : costs) trail += fmt(" %.5f", c);
  s.report(6, "convergence plateau (star, L=1)", worst < 0.01 && elapsed < 5.0,
           fmt("max rel change=%.2e (<1%% only from n=%ld) t=%.3fs costs n=16..1024:%s", worst,
               holds_from, elapsed, trail.c_str()));
}

void lift_identity(Suite& s) {
  double worst = 0.0;
  for (const auto& run : s.runs) {
    const auto& r = run.result;
    const double delta = (r.c + r.c_prime) / static_cast<double>(r.n);
    const double expected = 2.0 * r.appopt.b0() * delta + delta * delta;
    worst = std::max(worst, std::abs((r.cost_subopt - r.cost_appopt) - expected));
  }
  s.report(3, "lift identity", worst <= 1e-12,
           fmt("%zu runs, max deviation=%.2e", s.runs.size(), worst));
}

void certification(Suite& s) {
  int bad = 0;
  double worst = 1e300;
  for (const auto& run : s.runs) {
    const auto& r = run.result;
    const auto cert = certify(r.subopt, run.signal, 8192);
    const bool ok = r.c_prime_mode == CPrimeMode::exact_postsolve && cert.certified &&
                    cert.min_margin >= -1e-9 && r.certified;
    if (!ok) ++bad;
    worst = std::min(worst, cert.min_margin);
  }
  s.report(7, "envelope certification (8192 grid)", bad == 0,
           fmt("%zu runs, uncertified=%d, smallest margin=%.3e", s.runs.size(), bad, worst));
}

void derivative_bounds(Suite& s) {
  std::mt19937_64 rng(99);
  int bad = 0;
  double tightest = 1e300;
  for (int i = 0; i < 100; ++i) {
    const int L = 1 + i % 10;
    const auto env = oracle::random_envelope(rng, L);
    double sampled = 0.0;
    for (int j = 0; j < 4096; ++j) {
      sampled = std::max(sampled, std::abs(oracle::slope_complex(env, j / 4096.0)));
    }
    const double exact = derivative_bound(env);
    const double apriori = apriori_derivative_bound(L, std::sqrt(energy(env)));
    if (!(sampled <= exact && exact <= apriori + 1e-9)) ++bad;
    tightest = std::min(tightest, exact - sampled);
  }
  s.report(8, "derivative-bound validity", bad == 0,
           fmt("100 envelopes, violations=%d, min(bound-sampled)=%.3e", bad, tightest));
}

void kkt(Suite& s) {
  int checked = 0, unconverged = 0, bad = 0;
  double pv = 0.0, st = 0.0, cp = 0.0;
  auto check = [&](const PeriodicSignal& sig, int L, long n, const qp::QpSolution& sol) {
    if (!sol.converged) {
      ++unconverged;
      return;
    }
    ++checked;
    const auto res = qp::kkt_residuals(build_constraints(sig, L, n), sol);
    pv = std::max(pv, res.primal_violation);
    st = std::max(st, res.stationarity);
    cp = std::max(cp, res.complementarity);
    if (res.primal_violation > 1e-9 || res.stationarity > 1e-8 || res.complementarity > 1e-8 ||
        res.dual_violation > 0.0) {
      ++bad;
    }
  };
  for (const auto& run : s.runs) check(run.signal, run.result.L, run.result.n, run.result.solver);
  for (const auto& f : s.fine) check(f.signal, f.L, f.n, f.solver);
  s.report(9, "KKT certificate", bad == 0 && unconverged == 0,
           fmt("%d solves, unconverged=%d, max pv=%.1e stat=%.1e comp=%.1e", checked, unconverged,
               pv, st, cp));
}

void superset(Suite& s) {
  std::vector<std::vector<Point>> polygons{shapes::five_point_star(),
                                           shapes::regular_polygon(3, 2.0, {5, 5}),
                                           shapes::regular_polygon(4, 1.0, {0, 0}, 0.3),
                                           shapes::ellipse(3.0, 1.0, 200, {-2, 1})};
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> radius(0.5, 1.5);
  while (polygons.size() < 10) {
    std::vector<Point> pts;
    const int k = 5 + static_cast<int>(rng() % 20);
    for (int i = 0; i < k; ++i) {
      const double a = 2.0 * kPi * (i + 0.3 * radius(rng)) / k;
      const double r = radius(rng);
      pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    if (Contour::from_points(pts).star_shaped()) polygons.push_back(pts);
  }
  int results = 0, outside = 0, uncertified = 0;
  for (const auto& pts : polygons) {
    const auto contour = Contour::from_points(pts);
    const auto sig = radial_parametrize(contour, 1024);
    for (int L = 1; L <= 5; ++L) {
      const auto& r = s.approx("superset", sig, L, 64);
      if (!r.certified) {
        ++uncertified;
        continue;
      }
      ++results;
      const auto region = reconstruct_region(r.subopt, 4096, contour.centroid());
      for (const auto& v : contour.points()) {
        if (!contains(region, v, 1e-6)) ++outside;
      }
    }
  }
  s.report(10, "superset property", outside == 0 && uncertified == 0,
           fmt("%zu contours, %d certified results, vertices outside=%d", polygons.size(),
               results, outside));
}

}  // namespace

int main() {
  Suite s;
  try {
    analytic_optimum(s);
    dc_oracle(s);
    sandwich(s);
    monotonicity(s);
    plateau(s);
    superset(s);
    // Criteria over every run above.
    lift_identity(s);
    certification(s);
    derivative_bounds(s);
    kkt(s);
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%s: %d criteria failed\n", s.failures == 0 ? "ACCEPTED" : "REJECTED", s.failures);
  return s.failures == 0 ? 0 : 1;
}
