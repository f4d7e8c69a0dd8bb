#pragma once

#include <map>
#include <string>
#include <vector>

#include "dsmlab/io.hpp"

namespace dsm {

struct CheckLine {
  std::string name;
  std::map<std::string, std::string> params;

  double num(const std::string& key, double fallback) const;
  std::string str(const std::string& key, const std::string& fallback) const;
};

/// One assertion per line: `name key=value key=value`. '#' comments.
std::vector<CheckLine> parse_checks(const std::string& text);

struct CheckResult {
  std::string series;
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Known checks (all thresholds explicit in the check spec):
///   mass_drift max_rel=          relative drift of the mass column
///   mass_cap tol=                mass <= max(mass0, |Omega|) (1+tol)
///   energy_pv max_rel=           positive variation of E vs |E(0)|
///   pte1_margin tol= [t_max=]    margin >= -tol * max v_inf on the window
///   pte3_margin tol=             margin >= -tol where defined
///   uv_identity tol=             |interaction - grad_norm| row-wise
///   mass_v tol=                  |mass - mass_v| row-wise
///   trend indicator= expect=growing|not_growing [r2=] [min_samples=]
///   est0_envelope [factor=]      grad_norm/(1+t), second-half vs first-half max
///   identity_residual max=       max residual over rows (NaN rows skipped)
///   bounded column= max=         sup |column| <= max
std::vector<CheckResult> run_checks(const SeriesTable& series, const std::string& series_name,
                                    const std::vector<CheckLine>& checks);

/// PASS/FAIL table; returns the number of failures.
int print_check_report(const std::vector<CheckResult>& results, FILE* out);

}  // namespace dsm
