#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace dampo::cli {

enum Exit : int { kOk = 0, kPhysics = 1, kUsage = 2 };

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::string output;  // primary output; stdout when empty
};

int cmd_validate(const Common& c);
int cmd_moments(const Common& c);
int cmd_state(const Common& c);
int cmd_evolve(const Common& c, bool classify, bool closed_form);
int cmd_figures(const Common& c, const std::string& which, const std::string& out_dir, int points);
int cmd_oracle_compare(const Common& c, int n_modes, double bound, const std::string& save_bath,
                       const std::string& load_bath);
int cmd_kernel(const Common& c);

// Discrete bath record: {n_modes, m, Omega0, omegas, weights, couplings}
std::string bath_to_json(const DiscreteBath& b);
DiscreteBath bath_from_json(const std::string& text);

}  // namespace dampo::cli
