#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "envlp/contour.hpp"
#include "envlp/envelope_solver.hpp"
#include "envlp/error.hpp"
#include "envlp/fourier_envelope.hpp"

namespace envlp::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Strips a '#' comment and surrounding whitespace.
inline std::string_view content(std::string_view line) {
  const auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  return trim(line);
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  const std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size()) return std::nullopt;
  return v;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return in;
}

}  // namespace detail

/// Reals are always printed with 17 significant digits (exact round trip).
inline std::string format_real(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Signal CSV: one value per line, optional "value" header, '#' comments.
inline std::vector<double> read_signal_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = detail::content(line);
    if (s.empty()) continue;
    if (!seen_data && s == "value") {
      seen_data = true;
      continue;
    }
    const auto v = detail::parse_double(s);
    if (!v) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": not a number");
    values.push_back(*v);
    seen_data = true;
  }
  return values;
}

inline std::vector<double> read_signal_csv(const std::string& path) {
  auto in = detail::open_input(path);
  return read_signal_csv(in);
}

inline void write_signal_csv(std::ostream& out, std::span<const double> values) {
  out << "value\n";
  for (double v : values) out << format_real(v) << '\n';
}

// Polygon CSV: "x,y" per line, optional "x,y" header, '#' comments.
inline std::vector<Point> read_polygon_csv(std::istream& in) {
  std::vector<Point> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = detail::content(line);
    if (s.empty()) continue;
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected x,y");
    }
    const auto x = detail::parse_double(s.substr(0, comma));
    const auto y = detail::parse_double(s.substr(comma + 1));
    if (!x || !y) {
      if (pts.empty() && detail::trim(s.substr(0, comma)) == "x" &&
          detail::trim(s.substr(comma + 1)) == "y") {
        continue;
      }
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": not a number pair");
    }
    pts.push_back({*x, *y});
  }
  return pts;
}

inline std::vector<Point> read_polygon_csv(const std::string& path) {
  auto in = detail::open_input(path);
  return read_polygon_csv(in);
}

/// Minimal streaming JSON writer with fixed real formatting.
class JsonWriter {
 public:
  JsonWriter& begin_object() { return open('{'); }
  JsonWriter& end_object() { return close('}'); }
  JsonWriter& begin_array() { return open('['); }
  JsonWriter& end_array() { return close(']'); }

  JsonWriter& key(std::string_view k) {
    separate();
    out_ << '"' << k << "\":";
    pending_key_ = true;
    return *this;
  }

  JsonWriter& value(double v) { return raw(format_real(v)); }
  JsonWriter& value(long v) { return raw(std::to_string(v)); }
  JsonWriter& value(int v) { return raw(std::to_string(v)); }
  JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
  JsonWriter& value(std::string_view v) {
    std::string s = "\"";
    for (char ch : v) {
      if (ch == '"' || ch == '\\') s += '\\';
      if (static_cast<unsigned char>(ch) < 0x20) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\u%04x", ch);
        s += buf;
        continue;
      }
      s += ch;
    }
    s += '"';
    return raw(s);
  }
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& value(std::span<const double> vs) {
    begin_array();
    for (double v : vs) value(v);
    return end_array();
  }

  std::string str() const { return out_.str(); }

 private:
  JsonWriter& open(char c) {
    separate();
    out_ << c;
    first_ = true;
    return *this;
  }
  JsonWriter& close(char c) {
    out_ << c;
    first_ = false;
    return *this;
  }
  JsonWriter& raw(std::string_view s) {
    separate();
    out_ << s;
    return *this;
  }
  void separate() {
    if (pending_key_) {
      pending_key_ = false;
      first_ = false;
      return;
    }
    if (!first_) out_ << ',';
    first_ = false;
  }

  std::ostringstream out_;
  bool first_ = true;
  bool pending_key_ = false;
};

inline void write_envelope(JsonWriter& w, const FourierEnvelope& env) {
  w.begin_object();
  w.key("L").value(env.harmonics());
  w.key("b0").value(env.b0());
  w.key("b_re").value(std::span<const double>(env.b_re()));
  w.key("b_im").value(std::span<const double>(env.b_im()));
  w.end_object();
}

inline void write_result(JsonWriter& w, const EnvelopeResult& r) {
  w.begin_object();
  w.key("L").value(r.L);
  w.key("n").value(r.n);
  w.key("appopt");
  write_envelope(w, r.appopt);
  w.key("subopt");
  write_envelope(w, r.subopt);
  w.key("c").value(r.c);
  w.key("c_prime").value(r.c_prime);
  w.key("c_prime_mode").value(to_string(r.c_prime_mode));
  w.key("cost_appopt").value(r.cost_appopt);
  w.key("cost_subopt").value(r.cost_subopt);
  w.key("paper_cost_subopt").value(r.excess_energy);
  w.key("gap_bound").value(r.gap_bound);
  w.key("certified").value(r.certified);
  w.key("min_margin").value(r.min_margin);
  w.key("solver").begin_object();
  w.key("iterations").value(r.solver.iterations);
  w.key("converged").value(r.solver.converged);
  w.key("primal_violation").value(r.solver.primal_violation);
  w.key("stationarity").value(r.solver.stationarity);
  w.end_object();
  w.end_object();
}

inline std::string result_json(const EnvelopeResult& r) {
  JsonWriter w;
  write_result(w, r);
  return w.str();
}

inline FourierEnvelope envelope_from_json(const nlohmann::json& j) {
  try {
    const int L = j.at("L").get<int>();
    auto re = j.at("b_re").get<std::vector<double>>();
    auto im = j.at("b_im").get<std::vector<double>>();
    if (L < 0 || re.size() != static_cast<std::size_t>(L) || im.size() != re.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "envelope L = " + std::to_string(L) + " does not match coefficient arrays");
    }
    return FourierEnvelope(j.at("b0").get<double>(), std::move(re), std::move(im));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("envelope: ") + e.what());
  }
}

}  // namespace envlp::io
