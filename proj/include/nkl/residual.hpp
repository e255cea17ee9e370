#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace nkl {

struct ResidualReport {
  std::string id;
  std::string anchor;  // human-readable statement of the identity
  int n_samples = 0;
  int n_skipped = 0;
  double max_residual = 0.0;
  double tol = 0.0;
  bool pass = true;
  std::string worst_sample;  // description of the sample attaining max_residual

  void record(double r, const std::string& where = {}) {
    ++n_samples;
    // A NaN residual sticks and fails the check.
    if (!std::isnan(max_residual) && (std::isnan(r) || r > max_residual)) {
      max_residual = r;
      worst_sample = where;
    }
    finalize();
  }

  void skip() { ++n_skipped; }

  void finalize() { pass = !std::isnan(max_residual) && max_residual <= tol; }
};

inline ResidualReport make_report(std::string id, std::string anchor, double tol) {
  ResidualReport r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.tol = tol;
  return r;
}

inline bool all_pass(const std::vector<ResidualReport>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const ResidualReport& r) { return r.pass; });
}

}  // namespace nkl
