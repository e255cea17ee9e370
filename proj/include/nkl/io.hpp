#pragma once

// Sampled-immersion files: a dense regular chart grid with (p, q) per node.

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "nkl/jet.hpp"

namespace nkl {

struct MalformedInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kSampledSchemaVersion = 1;

inline nlohmann::ordered_json grid_to_json(const SampledGrid& g) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_version"] = kSampledSchemaVersion;
  j["chart_dim"] = 3;
  j["grid"] = {{"origin", g.origin}, {"step", g.step}, {"counts", g.counts}};
  ordered_json recs = ordered_json::array();
  for (int a = 0; a < g.counts[0]; ++a)
    for (int b = 0; b < g.counts[1]; ++b)
      for (int c = 0; c < g.counts[2]; ++c) {
        const Point& v = g.at(a, b, c);
        recs.push_back({{"x", g.node(a, b, c)},
                        {"p", {v.p.w, v.p.x, v.p.y, v.p.z}},
                        {"q", {v.q.w, v.q.x, v.q.y, v.q.z}}});
      }
  j["records"] = std::move(recs);
  return j;
}

inline std::string grid_to_string(const SampledGrid& g) { return grid_to_json(g).dump(1); }

namespace detail {

template <std::size_t N>
std::array<double, N> read_reals(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != N) throw MalformedInput(std::string(what) + ": expected " + std::to_string(N) + " numbers");
  std::array<double, N> r;
  for (std::size_t i = 0; i < N; ++i) {
    if (!j[i].is_number()) throw MalformedInput(std::string(what) + ": not a number");
    r[i] = j[i].get<double>();
    if (!std::isfinite(r[i])) throw MalformedInput(std::string(what) + ": not finite");
  }
  return r;
}

inline Quat read_unit(const nlohmann::json& j, const char* what, std::size_t rec) {
  auto a = read_reals<4>(j, what);
  Quat q{a[0], a[1], a[2], a[3]};
  if (std::abs(q.norm() - 1.0) > 1e-9)
    throw MalformedInput("record " + std::to_string(rec) + ": |" + what + "| deviates from 1 by more than 1e-9");
  return q / q.norm();
}

}  // namespace detail

/// Parse and validate a sampled-immersion document.
inline SampledGrid grid_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw MalformedInput("top level must be an object");
    if (!j.contains("schema_version") || j["schema_version"] != kSampledSchemaVersion)
      throw MalformedInput("unsupported schema_version");
    if (!j.contains("chart_dim") || j["chart_dim"] != 3) throw MalformedInput("chart_dim must be 3");
    if (!j.contains("grid") || !j.contains("records")) throw MalformedInput("missing grid or records");
    const auto& gj = j["grid"];
    SampledGrid g;
    g.origin = detail::read_reals<3>(gj.at("origin"), "grid.origin");
    g.step = detail::read_reals<3>(gj.at("step"), "grid.step");
    auto c = detail::read_reals<3>(gj.at("counts"), "grid.counts");
    for (int a = 0; a < 3; ++a) {
      if (c[a] < 1 || c[a] != std::floor(c[a]) || c[a] > 1e6) throw MalformedInput("grid.counts must be positive integers");
      g.counts[a] = int(c[a]);
      if (g.counts[a] > 1 && !(g.step[a] > 0)) throw MalformedInput("grid.step must be positive");
    }
    const auto& recs = j["records"];
    if (!recs.is_array()) throw MalformedInput("records must be an array");
    if (recs.size() != g.size())
      throw MalformedInput("grid incomplete: " + std::to_string(recs.size()) + " records for " +
                           std::to_string(g.size()) + " nodes");
    g.values.assign(g.size(), Point{});
    std::vector<char> seen(g.size(), 0);
    for (std::size_t r = 0; r < recs.size(); ++r) {
      const auto& rec = recs[r];
      if (!rec.is_object()) throw MalformedInput("record " + std::to_string(r) + " is not an object");
      auto x = detail::read_reals<3>(rec.at("x"), "x");
      std::array<int, 3> idx;
      try {
        idx = g.locate(x);
      } catch (const std::domain_error&) {
        throw MalformedInput("record " + std::to_string(r) + " is off the grid");
      }
      std::size_t k = g.index(idx[0], idx[1], idx[2]);
      if (seen[k]) throw MalformedInput("record " + std::to_string(r) + " duplicates a grid node");
      seen[k] = 1;
      g.values[k] = {detail::read_unit(rec.at("p"), "p", r), detail::read_unit(rec.at("q"), "q", r)};
    }
    g.validate();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("sampled immersion: ") + e.what());
  } catch (const MalformedInput&) {
    throw;
  } catch (const std::exception& e) {
    throw MalformedInput(std::string("sampled immersion: ") + e.what());
  }
}

inline SampledGrid grid_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("not valid JSON: ") + e.what());
  }
  return grid_from_json(j);
}

inline SampledGrid read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return grid_from_string(ss.str());
}

inline void write_grid_file(const std::string& path, const SampledGrid& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << grid_to_string(g) << '\n';
}

}  // namespace nkl
