#pragma once

#include <string>
#include <vector>

#include "dampo/spectral.hpp"

namespace dampo::test {

struct FigureSet {
  std::string name;
  double Gamma;
  cplx gp, gm;
};

inline const std::vector<FigureSet>& figure_sets() {
  static const std::vector<FigureSet> s{
      {"2a", 0.01, {0.75, 0.0}, {0.25, 0.0}},
      {"2b", 0.01, {0.5, 5.0}, {0.5, -5.0}},
      {"3a", 10.0, {0.75, 0.0}, {0.25, 0.0}},
      {"3b", 10.0, {0.5, 5.0}, {0.5, -5.0}},
  };
  return s;
}

inline SpectralDensity density(const FigureSet& f) { return make_parametric_density(f.Gamma, f.gp, f.gm); }

}  // namespace dampo::test
