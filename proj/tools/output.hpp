#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "plpcov/validation.hpp"

namespace plpcov::cli {

struct Row {
  double beta_db = 0.0;
  std::optional<double> pc_analytic, pc_mc, ci_lo, ci_hi, pc_ppp;
};

struct Curve {
  std::string label;
  std::vector<Row> rows;
};

inline constexpr const char* kCsvHeader = "beta_db,pc_analytic,pc_mc,ci_lo,ci_hi,pc_ppp";

void write_csv(std::ostream& os, const Curve& curve);

/// Line plot of every curve: analytic solid, MC markers with CI bars, PPP dashed.
void write_svg(std::ostream& os, const std::string& title, const std::vector<Curve>& curves);

void write_report(std::ostream& os, const ValidationReport& report);

/// path with "_<label>" inserted before the extension.
std::string suffixed_path(const std::string& path, const std::string& label);

}  // namespace plpcov::cli
