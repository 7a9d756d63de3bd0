#pragma once

#include <array>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "minvar/errors.hpp"
#include "minvar/families/build.hpp"
#include "minvar/harness/identity_campaign.hpp"
#include "minvar/io/json.hpp"

namespace minvar::io {

inline const std::vector<std::string>& verify_check_names() {
  static const std::vector<std::string> names{"minimality", "screw", "cone_scaling", "takahashi", "graph_pde"};
  return names;
}

struct OutputPaths {
  std::optional<std::string> report;
  std::optional<std::string> csv;
  std::optional<std::string> mesh;

  friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

/// Regular grid over two parameters; the others are held at `fixed` (default
/// the domain midpoint). An empty projection means "last-axis":
/// (x, y, z) = (coord 0, coord 1, last coord).
struct MeshConfig {
  std::array<int, 2> grid{64, 64};
  std::array<int, 2> params{0, 1};
  std::vector<double> fixed;
  Box box;  // intervals for the two grid parameters; empty means the domain
  std::optional<std::array<int, 3>> projection = std::array<int, 3>{0, 1, 2};

  friend bool operator==(const MeshConfig& a, const MeshConfig& b) {
    if (a.box.size() != b.box.size()) return false;
    for (size_t i = 0; i < a.box.size(); ++i) {
      if (a.box[i].lo != b.box[i].lo || a.box[i].hi != b.box[i].hi) return false;
    }
    return a.grid == b.grid && a.params == b.params && a.fixed == b.fixed && a.projection == b.projection;
  }
};

struct TakahashiConfig {
  int L = 2;
  ChartKind xs_chart = ChartKind::stereographic;

  friend bool operator==(const TakahashiConfig&, const TakahashiConfig&) = default;
};

struct RunConfig {
  FamilySpecPtr family;
  SamplePlan plan;
  TolerancePolicy tolerances;
  std::vector<std::string> checks;
  OutputPaths output;
  MeshConfig mesh;
  TakahashiConfig takahashi;
};

inline Json to_json(const MeshConfig& m) {
  Json j{{"grid", m.grid}, {"params", m.params}};
  if (!m.fixed.empty()) j["fixed"] = m.fixed;
  if (!m.box.empty()) j["box"] = to_json(m.box);
  if (m.projection) {
    j["projection"] = *m.projection;
  } else {
    j["projection"] = "last-axis";
  }
  return j;
}

inline Json to_json(const RunConfig& c) {
  Json j{{"version", kSchemaVersion}};
  j["family"] = to_json(*c.family);
  j["plan"] = to_json(c.plan);
  j["tolerances"] = to_json(c.tolerances);
  j["checks"] = c.checks;
  Json out = Json::object();
  if (c.output.report) out["report"] = *c.output.report;
  if (c.output.csv) out["csv"] = *c.output.csv;
  if (c.output.mesh) out["mesh"] = *c.output.mesh;
  j["output"] = out;
  j["mesh"] = to_json(c.mesh);
  j["takahashi"] = Json{{"L", c.takahashi.L}, {"xs_chart", to_string(c.takahashi.xs_chart)}};
  return j;
}

namespace detail {

template <size_t K>
std::array<int, K> read_int_array(const Json& v, const std::string& where) {
  const auto xs = read_array<int>(v, where);
  if (xs.size() != K) throw SpecError(where + ": expected " + std::to_string(K) + " integers");
  std::array<int, K> out{};
  for (size_t i = 0; i < K; ++i) out[i] = xs[i];
  return out;
}

inline MeshConfig read_mesh(ObjectReader r) {
  MeshConfig m;
  if (r.has("grid")) m.grid = read_int_array<2>(r.raw("grid"), r.field("grid"));
  if (m.grid[0] < 2 || m.grid[1] < 2) throw SpecError(r.field("grid") + ": needs at least 2 x 2 vertices");
  if (r.has("params")) m.params = read_int_array<2>(r.raw("params"), r.field("params"));
  if (m.params[0] == m.params[1]) throw SpecError(r.field("params") + ": the two grid parameters must differ");
  if (r.has("fixed")) m.fixed = read_array<double>(r.raw("fixed"), r.field("fixed"));
  if (r.has("box")) {
    m.box = read_box(r.raw("box"), r.field("box"));
    if (m.box.size() != 2) throw SpecError(r.field("box") + ": expected two [lo, hi] intervals");
  }
  if (r.has("projection")) {
    const Json& p = r.raw("projection");
    if (p.is_string()) {
      if (p.get<std::string>() != "last-axis") {
        throw SpecError(r.field("projection") + ": expected three indices or \"last-axis\"");
      }
      m.projection.reset();
    } else {
      m.projection = read_int_array<3>(p, r.field("projection"));
    }
  }
  r.finish();
  return m;
}

}  // namespace detail

/// Parses and validates a run configuration. Every failure is a SpecError
/// naming the offending field.
inline RunConfig config_from_json(const Json& j) {
  ObjectReader r(j, "");
  check_version(r);
  RunConfig c;
  c.family = family_from_json(r.raw("family"));
  if (r.has("plan")) c.plan = read_plan(r.child("plan"));
  if (r.has("tolerances")) c.tolerances = read_tolerances(r.child("tolerances"));
  if (r.has("checks")) c.checks = read_array<std::string>(r.raw("checks"), "checks");
  std::set<std::string> known(verify_check_names().begin(), verify_check_names().end());
  known.insert(identity_check_names().begin(), identity_check_names().end());
  for (size_t i = 0; i < c.checks.size(); ++i) {
    if (!known.count(c.checks[i])) {
      throw SpecError("checks[" + std::to_string(i) + "]: unknown check '" + c.checks[i] + "'");
    }
  }
  if (r.has("output")) {
    ObjectReader o = r.child("output");
    if (o.has("report")) c.output.report = o.get<std::string>("report");
    if (o.has("csv")) c.output.csv = o.get<std::string>("csv");
    if (o.has("mesh")) c.output.mesh = o.get<std::string>("mesh");
    o.finish();
  }
  if (r.has("mesh")) c.mesh = detail::read_mesh(r.child("mesh"));
  if (r.has("takahashi")) {
    ObjectReader t = r.child("takahashi");
    c.takahashi.L = t.get_or<int>("L", c.takahashi.L);
    if (c.takahashi.L < 1) throw SpecError("takahashi.L: must be >= 1");
    c.takahashi.xs_chart = read_chart(t, "xs_chart");
    t.finish();
  }
  r.finish();
  (void)build_immersion(*c.family);  // surfaces family validation errors before any evaluation
  return c;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError("cannot write '" + path + "'");
  out << text;
  if (!out) throw SpecError("failed writing '" + path + "'");
}

inline RunConfig load_config(const std::string& path) { return config_from_json(parse_json(read_file(path), path)); }

}  // namespace minvar::io
