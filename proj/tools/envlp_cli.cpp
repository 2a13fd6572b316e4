// envlp: lowpass envelope approximation of periodic signals.
//
//   envlp approximate SIGNAL.csv --L 1 --n 64
//   envlp ingest POLYGON.csv --samples 1024 --out r.csv
//   envlp sweep SIGNAL.csv --L 1,2,3 --n 8,16,32,64
//   envlp certify RESULT.json SIGNAL.csv --grid 32768
//
// Exit codes: 0 success/certified, 3 uncertified or partially failed sweep,
// 1 usage, input or numerical error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "envlp/envlp.hpp"
#include "envlp/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUncertified = 3;

envlp::qp::QpOptions solver_options() {
  envlp::qp::QpOptions opt;
  if (const char* env = std::getenv("ENVLP_MAX_ITER")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw envlp::Error(envlp::ErrorCode::InvalidArgument,
                         std::string("ENVLP_MAX_ITER must be a positive integer, got ") + env);
    }
    opt.max_iter = v;
  }
  return opt;
}

envlp::CPrimeMode parse_mode(const std::string& s) {
  return s == "apriori" ? envlp::CPrimeMode::apriori : envlp::CPrimeMode::exact_postsolve;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw envlp::Error(envlp::ErrorCode::ParseError, "cannot write " + out_path);
  out << text;
}

const char* kTableHeader = "L,n,cost_appopt,cost_subopt,gap_bound,certified,min_margin,status\n";

std::string table_row(int L, long n, const envlp::EnvelopeResult* r, const std::string& error) {
  using envlp::io::format_real;
  std::ostringstream s;
  s << L << ',' << n << ',';
  if (r) {
    s << format_real(r->cost_appopt) << ',' << format_real(r->cost_subopt) << ','
      << format_real(r->gap_bound) << ',' << (r->certified ? "true" : "false") << ','
      << format_real(r->min_margin) << ',' << (r->solver.converged ? "ok" : "not_converged");
  } else {
    std::string msg = error;
    for (char& ch : msg) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    s << ",,,,," << "error: " << msg;
  }
  s << '\n';
  return s.str();
}

bool result_ok(const envlp::EnvelopeResult& r) { return r.certified && r.solver.converged; }

struct CommonFlags {
  std::string signal;
  std::optional<double> lipschitz;
  std::string cprime_mode = "exact";
  int grid = 8192;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("signal", f.signal, "Signal CSV (one sample per line)")->required();
  cmd->add_option("--lipschitz", f.lipschitz, "Lipschitz constant c of the signal");
  cmd->add_option("--cprime-mode", f.cprime_mode, "Envelope slope bound")
      ->check(CLI::IsMember({"exact", "apriori"}));
  cmd->add_option("--grid", f.grid, "Verification grid size")->check(CLI::Range(16, 1 << 26));
  cmd->add_option("--out", f.out, "Write output to FILE instead of stdout");
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

envlp::PeriodicSignal load_signal(const CommonFlags& f) {
  return envlp::PeriodicSignal::from_samples(envlp::io::read_signal_csv(f.signal), f.lipschitz);
}

int run_approximate(const CommonFlags& f, int L, long n) {
  const auto sig = load_signal(f);
  envlp::EnvelopeOptions opt;
  opt.c_prime_mode = parse_mode(f.cprime_mode);
  opt.grid_m = f.grid;
  opt.qp = solver_options();
  const auto r = envlp::approximate(sig, L, n, opt);
  if (f.format == "csv") {
    emit(std::string(kTableHeader) + table_row(L, n, &r, {}), f.out);
  } else {
    emit(envlp::io::result_json(r) + "\n", f.out);
  }
  if (!r.solver.converged) std::cerr << "warning: QP solver did not converge\n";
  if (!r.certified) std::cerr << "uncertified: min_margin = " << r.min_margin << "\n";
  return result_ok(r) ? kExitOk : kExitUncertified;
}

int run_sweep(const CommonFlags& f, const std::vector<int>& Ls, const std::vector<long>& ns) {
  if (Ls.empty() || ns.empty()) {
    std::cerr << "error: sweep needs non-empty --L and --n lists\n";
    return kExitError;
  }
  const auto sig = load_signal(f);
  envlp::SweepSpec spec;
  spec.L_values = Ls;
  spec.n_values = ns;
  spec.grid_m = f.grid;
  spec.c_prime_mode = parse_mode(f.cprime_mode);
  const auto rows = envlp::run_sweep(sig, spec, solver_options());

  bool all_ok = true;
  std::string text;
  if (f.format == "csv") {
    text = kTableHeader;
    for (const auto& row : rows) {
      text += table_row(row.L, row.n, row.ok() ? &*row.result : nullptr, row.error);
    }
  } else {
    envlp::io::JsonWriter w;
    w.begin_array();
    for (const auto& row : rows) {
      if (row.ok()) {
        envlp::io::write_result(w, *row.result);
      } else {
        w.begin_object().key("L").value(row.L).key("n").value(row.n);
        w.key("error").value(row.error).end_object();
      }
    }
    w.end_array();
    text = w.str() + "\n";
  }
  for (const auto& row : rows) {
    if (!row.ok()) {
      std::cerr << "L=" << row.L << " n=" << row.n << ": " << row.error << "\n";
      all_ok = false;
    } else if (!result_ok(*row.result)) {
      all_ok = false;
    }
  }
  emit(text, f.out);
  return all_ok ? kExitOk : kExitUncertified;
}

int run_ingest(const std::string& polygon, int samples, const std::string& out,
               std::string meta) {
  const auto contour = envlp::Contour::from_points(envlp::io::read_polygon_csv(polygon));
  const auto sig = envlp::radial_parametrize(contour, samples);
  if (!contour.star_shaped()) {
    std::cerr << "warning: contour is not star-shaped about its centroid; "
                 "using the farthest boundary crossing per ray\n";
  }
  std::ostringstream csv;
  envlp::io::write_signal_csv(csv, sig.samples());
  emit(csv.str(), out);

  if (meta.empty() && !out.empty()) meta = out + ".meta.json";
  envlp::io::JsonWriter w;
  w.begin_object();
  w.key("centroid").begin_object();
  w.key("x").value(contour.centroid().x).key("y").value(contour.centroid().y);
  w.end_object();
  w.key("star_shaped").value(contour.star_shaped());
  w.key("samples").value(samples);
  w.key("angle_origin").value(-std::numbers::pi);
  w.key("lipschitz_estimate").value(sig.lipschitz_c());
  w.end_object();
  if (meta.empty()) {
    std::cerr << w.str() << "\n";
  } else {
    emit(w.str() + "\n", meta);
  }
  return kExitOk;
}

int run_certify(const std::string& result_path, const std::string& signal_path, int grid,
                std::optional<int> expected_L) {
  std::ifstream in(result_path);
  if (!in) throw envlp::Error(envlp::ErrorCode::ParseError, "cannot open " + result_path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw envlp::Error(envlp::ErrorCode::ParseError, std::string("result JSON: ") + e.what());
  }
  const auto sig = envlp::PeriodicSignal::from_samples(envlp::io::read_signal_csv(signal_path));
  const auto entries = doc.is_array() ? doc : nlohmann::json::array({doc});

  bool all_certified = true;
  for (const auto& entry : entries) {
    if (entry.contains("error")) continue;
    if (!entry.contains("subopt")) {
      throw envlp::Error(envlp::ErrorCode::ParseError, "result entry has no subopt envelope");
    }
    const auto env = envlp::io::envelope_from_json(entry.at("subopt"));
    if (entry.contains("L") && entry.at("L").get<int>() != env.harmonics()) {
      throw envlp::Error(envlp::ErrorCode::DimensionMismatch,
                         "result L does not match its subopt envelope");
    }
    if (expected_L && *expected_L != env.harmonics()) {
      throw envlp::Error(envlp::ErrorCode::DimensionMismatch,
                         "result has L = " + std::to_string(env.harmonics()) + ", expected " +
                             std::to_string(*expected_L));
    }
    const auto cert = envlp::certify(env, sig, grid);
    std::cout << "L=" << env.harmonics();
    if (entry.contains("n")) std::cout << " n=" << entry.at("n").get<long>();
    std::cout << " grid=" << grid << " min_margin=" << envlp::io::format_real(cert.min_margin)
              << " " << (cert.certified ? "CERTIFIED" : "UNCERTIFIED") << "\n";
    all_certified = all_certified && cert.certified;
  }
  return all_certified ? kExitOk : kExitUncertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lowpass envelope approximation of periodic signals"};
  app.require_subcommand(1);

  CommonFlags approx_flags;
  int approx_L = 1;
  long approx_n = 64;
  auto* approx = app.add_subcommand("approximate", "Solve one (L, n) envelope problem");
  add_common(approx, approx_flags);
  approx->add_option("--L", approx_L, "Harmonic budget")->required()->check(CLI::Range(0, 64));
  approx->add_option("--n", approx_n, "Constraint points")->required();

  std::string polygon;
  int samples = 1024;
  std::string ingest_out;
  std::string ingest_meta;
  auto* ingest = app.add_subcommand("ingest", "Turn a polygon into a radial signal CSV");
  ingest->add_option("polygon", polygon, "Polygon CSV (x,y per line)")->required();
  ingest->add_option("--samples", samples, "Angular samples M")->check(CLI::Range(64, 1 << 24));
  ingest->add_option("--out", ingest_out, "Signal CSV output (default stdout)");
  ingest->add_option("--meta", ingest_meta, "Sidecar JSON (default OUT.meta.json)");

  CommonFlags sweep_flags;
  std::vector<int> sweep_L;
  std::vector<long> sweep_n;
  auto* sweep = app.add_subcommand("sweep", "Solve a grid of (L, n) pairs");
  add_common(sweep, sweep_flags);
  sweep->add_option("--L", sweep_L, "Harmonic budgets, comma separated")->delimiter(',');
  sweep->add_option("--n", sweep_n, "Constraint counts, comma separated")->delimiter(',');

  std::string result_path;
  std::string certify_signal;
  int certify_grid = 8192;
  std::optional<int> certify_L;
  auto* cert = app.add_subcommand("certify", "Re-check a stored result against a signal");
  cert->add_option("result", result_path, "Result JSON from approximate or sweep")->required();
  cert->add_option("signal", certify_signal, "Signal CSV")->required();
  cert->add_option("--grid", certify_grid, "Verification grid size")->check(CLI::Range(16, 1 << 26));
  cert->add_option("--L", certify_L, "Expected harmonic budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*approx) return run_approximate(approx_flags, approx_L, approx_n);
    if (*ingest) return run_ingest(polygon, samples, ingest_out, ingest_meta);
    if (*sweep) return run_sweep(sweep_flags, sweep_L, sweep_n);
    if (*cert) return run_certify(result_path, certify_signal, certify_grid, certify_L);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
