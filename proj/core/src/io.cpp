#include "dampo/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "dampo/errors.hpp"

namespace dampo::io {

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return columns[i];
  throw Error(ErrorCode::InvalidArgument, "CSV has no column '" + name + "'");
}

bool CsvTable::has(const std::string& name) const {
  for (const auto& h : header)
    if (h == name) return true;
  return false;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) {
    if (s == "inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::InvalidArgument, "CSV line " + std::to_string(line) + ": cannot parse '" + s + "'");
  }
  return v;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (s[0] == '#') {
      t.comments.push_back(trim(s.substr(1)));
      continue;
    }
    const auto cells = split(s);
    if (t.header.empty()) {
      t.header = cells;
      t.columns.assign(cells.size(), {});
      continue;
    }
    if (cells.size() != t.header.size())
      throw Error(ErrorCode::InvalidArgument, "CSV line " + std::to_string(n) + ": expected " +
                                                  std::to_string(t.header.size()) + " fields");
    for (std::size_t i = 0; i < cells.size(); ++i) t.columns[i].push_back(parse_double(cells[i], n));
  }
  if (t.header.empty()) throw Error(ErrorCode::InvalidArgument, "CSV has no header");
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  return read_csv(f);
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (const auto& c : table.comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << format_double(table.columns[i][r]);
    out << '\n';
  }
}

void write_series(std::ostream& out, const EvolutionSeries& s, const std::vector<std::string>& comments) {
  CsvTable t;
  t.comments = comments;
  t.header = {"t", "c", "s", "d"};
  t.columns = {s.times, s.c, s.s, s.d};
  if (s.mean_x.size() == s.times.size() && s.mean_p.size() == s.times.size()) {
    t.header.push_back("mean_x");
    t.header.push_back("mean_p");
    t.columns.push_back(s.mean_x);
    t.columns.push_back(s.mean_p);
  }
  write_csv(out, t);
}

void write_trajectory(std::ostream& out, const CovarianceTrajectory& tr, const std::vector<std::string>& comments) {
  CsvTable t;
  t.comments = comments;
  t.header = {"t", "var_x", "var_p", "cov_xp", "mean_x", "mean_p"};
  t.columns = {tr.times, tr.var_x, tr.var_p, tr.cov_xp, tr.mean_x, tr.mean_p};
  write_csv(out, t);
}

void write_kernel(std::ostream& out, const MemoryKernel& k, const std::vector<std::string>& comments) {
  CsvTable t;
  t.comments = comments;
  t.header = {"t", "kappa"};
  t.columns = {k.times, k.kappa};
  write_csv(out, t);
}

CouplingSpectrum read_coupling(const std::string& path) {
  const CsvTable t = read_csv_file(path);
  CouplingSpectrum V;
  V.omega_grid = t.column("omega");
  V.v_values = t.has("v") ? t.column("v") : t.column("V");
  return V;
}

SpectralFunction read_spectral_function(const std::string& path) {
  const CsvTable t = read_csv_file(path);
  return {t.column("omega"), t.column("J")};
}

DensityTable read_density_table(const std::string& path) {
  const CsvTable t = read_csv_file(path);
  DensityTable d;
  d.omega_grid = t.column("omega");
  d.values = t.column("pi");
  return d;
}

}  // namespace dampo::io
