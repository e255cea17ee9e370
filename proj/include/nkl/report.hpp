#pragma once

// Verification reports and their JSON, Markdown and CSV renderings.

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nkl/residual.hpp"

namespace nkl {

inline constexpr int kReportSchemaVersion = 1;

enum class OutputFormat { json, markdown, csv };

struct VerificationReport {
  std::string command;
  nlohmann::ordered_json config_echo = nlohmann::ordered_json::object();
  std::vector<ResidualReport> checks;
  nlohmann::ordered_json properties = nlohmann::ordered_json::object();

  bool pass() const { return all_pass(checks); }

  void append(const std::vector<ResidualReport>& rs, const std::string& prefix = {}) {
    for (auto r : rs) {
      if (!prefix.empty()) r.id = prefix + "/" + r.id;
      checks.push_back(std::move(r));
    }
  }

  const ResidualReport* first_failure() const {
    for (const auto& r : checks)
      if (!r.pass) return &r;
    return nullptr;
  }
};

namespace detail {

inline nlohmann::ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

inline std::string csv_quote(const std::string& s) {
  std::string r = "\"";
  for (char c : s) {
    if (c == '"') r += '"';
    r += c;
  }
  return r + "\"";
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const VerificationReport& rep) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = rep.command;
  j["config_echo"] = rep.config_echo;
  ordered_json checks = ordered_json::array();
  for (const auto& r : rep.checks) {
    ordered_json c;
    c["id"] = r.id;
    c["paper_anchor"] = r.anchor;
    c["n_samples"] = r.n_samples;
    c["n_skipped"] = r.n_skipped;
    c["max_residual"] = detail::number_or_null(r.max_residual);
    c["tol"] = r.tol;
    c["pass"] = r.pass;
    if (!r.worst_sample.empty()) c["worst_sample"] = r.worst_sample;
    checks.push_back(std::move(c));
  }
  j["checks"] = std::move(checks);
  j["properties"] = rep.properties;
  j["pass"] = rep.pass();
  return j;
}

inline std::string render(const VerificationReport& rep, OutputFormat f) {
  std::ostringstream os;
  switch (f) {
    case OutputFormat::json:
      os << to_json(rep).dump(2) << '\n';
      break;
    case OutputFormat::markdown: {
      os << "# " << rep.command << "\n\n";
      os << "| id | statement | samples | skipped | max residual | tol | pass |\n";
      os << "|---|---|---|---|---|---|---|\n";
      for (const auto& r : rep.checks)
        os << "| " << r.id << " | " << r.anchor << " | " << r.n_samples << " | " << r.n_skipped << " | "
           << detail::fmt(r.max_residual) << " | " << detail::fmt(r.tol) << " | " << (r.pass ? "yes" : "NO")
           << " |\n";
      if (!rep.properties.empty()) os << "\n## properties\n\n```json\n" << rep.properties.dump(2) << "\n```\n";
      os << "\n**" << (rep.pass() ? "PASS" : "FAIL") << "**\n";
      break;
    }
    case OutputFormat::csv:
      os << "id,paper_anchor,n_samples,n_skipped,max_residual,tol,pass\n";
      for (const auto& r : rep.checks) {
        std::ostringstream mr;
        mr << std::setprecision(17) << r.max_residual;
        os << detail::csv_quote(r.id) << ',' << detail::csv_quote(r.anchor) << ',' << r.n_samples << ','
           << r.n_skipped << ',' << mr.str() << ',' << r.tol << ',' << (r.pass ? "true" : "false") << '\n';
      }
      break;
  }
  return os.str();
}

}  // namespace nkl
