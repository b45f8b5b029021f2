#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dampo::cli {

struct Curve {
  std::string label;
  std::vector<double> y;
  bool dashed = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<Curve> curves;
  std::vector<std::string> stamp;  // written as an XML comment
};

// Fixed-precision coordinates so the output is byte-stable.
void write_svg(std::ostream& out, const Plot& plot);

}  // namespace dampo::cli
