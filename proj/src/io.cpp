#include "vortexmf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace vortexmf::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

CirculationMeasure read_measure(std::istream& in) {
  std::vector<Atom> atoms;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    std::istringstream fields{std::string(body)};
    std::string a_tok;
    std::string w_tok;
    std::string extra;
    fields >> a_tok >> w_tok;
    if (fields >> extra) throw ParseError("expected \"alpha weight\", found extra field '" + extra + "'", lineno);
    const auto alpha = parse_double(a_tok);
    const auto weight = parse_double(w_tok);
    if (!alpha || !weight) {
      throw ParseError("expected \"alpha weight\", got '" + std::string(body) + "'", lineno);
    }
    atoms.push_back({*alpha, *weight});
  }
  if (atoms.empty()) throw ParseError("measure file has no atoms", 0);
  try {
    return CirculationMeasure::from_atoms(std::move(atoms));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

CirculationMeasure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open measure file '" + path + "'", 0);
  return read_measure(in);
}

void write_field_csv(std::ostream& out, const SpectralTorus& torus, const Field& f,
                     std::optional<std::uint64_t> seed) {
  torus.check_shape(f);
  out << "# torus L=" << format_double(torus.side_length()) << " n=" << torus.grid_n() << '\n';
  if (seed) out << "# seed=" << *seed << '\n';
  const int n = f.n();
  std::string row;
  for (int i = 0; i < n; ++i) {
    row.clear();
    for (int j = 0; j < n; ++j) {
      if (j > 0) row += ',';
      row += format_double(f(i, j));
    }
    out << row << '\n';
  }
}

LoadedField read_field_csv(std::istream& in) {
  std::string line;
  int lineno = 1;
  if (!std::getline(in, line)) throw ParseError("empty field file", 1);
  double side = 0.0;
  int n = 0;
  {
    std::string_view h = trim(line);
    const auto lpos = h.find("L=");
    const auto npos = h.find("n=");
    if (!h.starts_with("# torus") || lpos == std::string_view::npos || npos == std::string_view::npos) {
      throw ParseError("expected header '# torus L=<L> n=<n>'", 1);
    }
    const auto l_end = h.find(' ', lpos);
    const auto l_val = parse_double(h.substr(lpos + 2, l_end - lpos - 2));
    const auto n_val = parse_double(h.substr(npos + 2));
    if (!l_val || !n_val || *n_val <= 0 || *n_val != std::floor(*n_val)) {
      throw ParseError("malformed torus header", 1);
    }
    side = *l_val;
    n = static_cast<int>(*n_val);
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n) * n);
  int rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    int cols = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      const auto tok = body.substr(start, comma == std::string_view::npos ? body.size() - start : comma - start);
      const auto v = parse_double(tok);
      if (!v) throw ParseError("bad number '" + std::string(tok) + "'", lineno);
      values.push_back(*v);
      ++cols;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cols != n) throw ParseError("expected " + std::to_string(n) + " columns", lineno);
    ++rows;
  }
  if (rows != n) throw ParseError("expected " + std::to_string(n) + " rows, found " + std::to_string(rows), 0);
  return {side, Field(n, std::move(values))};
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace, std::uint64_t seed) {
  out << "# seed=" << seed << '\n';
  out << "iter,J,residual_norm,step,max_v\n";
  for (const TraceRow& r : trace) {
    out << r.iter << ',' << format_double(r.energy) << ',' << format_double(r.residual_norm) << ','
        << format_double(r.step) << ',' << format_double(r.max_v) << '\n';
  }
}

void write_profile_csv(std::ostream& out, const BlowupProfile& profile, const std::optional<LiFit>& fit,
                       std::uint64_t seed) {
  out << "# seed=" << seed << " sigma=" << format_double(profile.sigma)
      << " alpha=" << format_double(profile.alpha) << '\n';
  out << "r,dw,fit_prediction\n";
  for (const ProfileSample& s : profile.samples) {
    out << format_double(s.r) << ',' << format_double(s.dw) << ',';
    if (fit) out << format_double(fit->intercept - fit->slope * std::log1p(s.r / profile.sigma));
    out << '\n';
  }
}

}  // namespace vortexmf::io
