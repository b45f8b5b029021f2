#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dampo/bath.hpp"
#include "dampo/dynamics.hpp"
#include "dampo/fano.hpp"
#include "dampo/oracle.hpp"

namespace dampo::io {

// Shortest round-trip decimal form.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  std::vector<std::string> comments;  // '#' lines, without the marker

  const std::vector<double>& column(const std::string& name) const;  // InvalidArgument if absent
  bool has(const std::string& name) const;
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const CsvTable& table);

// `t,c,s,d,mean_x,mean_p`; the mean columns are written only when present
void write_series(std::ostream& out, const EvolutionSeries& s, const std::vector<std::string>& comments = {});
// `t,var_x,var_p,cov_xp,mean_x,mean_p`
void write_trajectory(std::ostream& out, const CovarianceTrajectory& tr, const std::vector<std::string>& comments = {});
// `t,kappa`
void write_kernel(std::ostream& out, const MemoryKernel& k, const std::vector<std::string>& comments = {});

// `omega,v` (`V` also accepted)
CouplingSpectrum read_coupling(const std::string& path);
// `omega,J`
SpectralFunction read_spectral_function(const std::string& path);
// `omega,pi`
DensityTable read_density_table(const std::string& path);

}  // namespace dampo::io
