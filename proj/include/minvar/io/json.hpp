#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "minvar/errors.hpp"
#include "minvar/families/family_spec.hpp"
#include "minvar/harness/plan.hpp"
#include "minvar/harness/report.hpp"

namespace minvar::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Non-finite doubles travel as the strings "inf", "-inf" and "nan".
inline Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

/// Typed access to one JSON object with path-qualified errors and rejection
/// of unknown fields.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SpecError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json& raw(const std::string& key) {
    if (!j_.contains(key)) throw SpecError(field(key) + ": missing required field");
    used_.insert(key);
    return j_.at(key);
  }

  ObjectReader child(const std::string& key) { return ObjectReader(raw(key), field(key)); }

  template <class T>
  T get(const std::string& key) {
    return convert<T>(raw(key), field(key));
  }

  template <class T>
  T get_or(const std::string& key, T fallback) {
    if (!j_.contains(key)) return fallback;
    return get<T>(key);
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!used_.count(item.key())) throw SpecError(field(item.key()) + ": unknown field");
    }
  }

  template <class T>
  static T convert(const Json& v, const std::string& where) {
    if constexpr (std::is_same_v<T, double>) {
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
      }
      throw SpecError(where + ": expected a number");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw SpecError(where + ": expected true or false");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw SpecError(where + ": expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw SpecError(where + ": expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned()) return v.get<T>();
        if (v.get<long long>() < 0) throw SpecError(where + ": expected a non-negative integer");
      }
      return v.get<T>();
    } else {
      static_assert(sizeof(T) == 0, "unsupported field type");
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

template <class T>
std::vector<T> read_array(const Json& v, const std::string& where) {
  if (!v.is_array()) throw SpecError(where + ": expected an array");
  std::vector<T> out;
  for (size_t i = 0; i < v.size(); ++i) {
    out.push_back(ObjectReader::convert<T>(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Family specs
// ---------------------------------------------------------------------------

inline ChartKind read_chart(ObjectReader& r, const std::string& key, ChartKind fallback = ChartKind::stereographic) {
  if (!r.has(key)) return fallback;
  const auto s = r.get<std::string>(key);
  try {
    return chart_kind_from_string(s);
  } catch (const SpecError&) {
    throw SpecError(r.field(key) + ": unknown chart kind '" + s + "'");
  }
}

inline Json to_json(const SphereChart& c) { return Json{{"kind", to_string(c.kind)}, {"branch", c.branch}}; }

inline Json to_json(const CliffordBlock& b) {
  Json j{{"N", b.N}, {"chart_x", to_json(b.chart_x)}, {"chart_y", to_json(b.chart_y)}};
  if (b.unitary_seed) j["unitary_seed"] = *b.unitary_seed;
  return j;
}

inline SphereChart read_sphere_chart(ObjectReader r, int n) {
  SphereChart c{n, read_chart(r, "kind"), r.get_or<int>("branch", 1)};
  r.finish();
  return c;
}

/// {"N", "chart"} or {"N", "chart_x", "chart_y"}, optionally "unitary_seed".
inline CliffordBlock read_block(ObjectReader r) {
  const int n = r.get<int>("N");
  if (n < 0) throw SpecError(r.field("N") + ": must be >= 0");
  CliffordBlock b = CliffordBlock::standard(n, read_chart(r, "chart"));
  if (r.has("chart_x")) b.chart_x = read_sphere_chart(r.child("chart_x"), n);
  if (r.has("chart_y")) b.chart_y = read_sphere_chart(r.child("chart_y"), n);
  if (r.has("unitary_seed")) b = b.with_unitary_seed(r.get<std::uint64_t>("unitary_seed"));
  r.finish();
  return b;
}

inline Json to_json(const PitchVector& p) { return Json{{"lambda0", p.lambda0}, {"lambdas", p.lambdas}}; }

inline PitchVector read_pitch(ObjectReader r) {
  PitchVector p;
  p.lambda0 = r.get<double>("lambda0");
  p.lambdas = read_array<double>(r.raw("lambdas"), r.field("lambdas"));
  r.finish();
  if (p.lambdas.empty()) throw SpecError(r.field("lambdas") + ": must have length L >= 1");
  return p;
}

inline Json to_json(const FamilySpec& spec);

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline Json helicoid_a_body(const GenHelicoidASpec& s) {
  Json j;
  j["L"] = s.pitch.L();
  j["N"] = s.blocks.empty() ? 0 : s.blocks.front().N;
  j["pitch"] = to_json(s.pitch);
  Json blocks = Json::array();
  for (const auto& b : s.blocks) blocks.push_back(to_json(b));
  j["blocks"] = blocks;
  return j;
}

}  // namespace detail

inline std::string kind_name(const FamilySpec& spec) {
  return std::visit(detail::overloaded{
                        [](const CliffordTorusSpec&) { return "CliffordTorus"; },
                        [](const CliffordConeSpec&) { return "CliffordCone"; },
                        [](const LRaysConeSpec&) { return "LRaysCone"; },
                        [](const LRaysCliffordConeSpec&) { return "LRaysCliffordCone"; },
                        [](const SphericalJoinSpec&) { return "SphericalJoin"; },
                        [](const GenHelicoidASpec&) { return "GenHelicoidA"; },
                        [](const GenHelicoidBSpec&) { return "GenHelicoidB"; },
                        [](const ChoeHoppeSpec&) { return "ChoeHoppe"; },
                        [](const BdjSpec&) { return "BDJ"; },
                        [](const LawsonSurfaceSpec&) { return "LawsonSurface"; },
                        [](const HarveyLawsonConeSpec&) { return "HarveyLawsonCone"; },
                        [](const SphericalSliceSpec&) { return "SphericalSlice"; },
                        [](const LatitudeCircleSpec&) { return "LatitudeCircle"; },
                        [](const RoundCylinderSpec&) { return "RoundCylinder"; },
                        [](const UnitSphereSpec&) { return "UnitSphere"; },
                    },
                    spec.value);
}

inline Json to_json(const FamilySpec& spec) {
  Json j{{"kind", kind_name(spec)}};
  const auto base = [](const FamilySpecPtr& p) {
    if (!p) throw SpecError("family spec without a base");
    return to_json(*p);
  };
  std::visit(detail::overloaded{
                 [&](const CliffordTorusSpec& s) { j["block"] = to_json(s.block); },
                 [&](const CliffordConeSpec& s) { j["block"] = to_json(s.block); },
                 [&](const LRaysConeSpec& s) {
                   j["L"] = s.L;
                   j["base"] = base(s.base);
                 },
                 [&](const LRaysCliffordConeSpec& s) {
                   j["L"] = s.L;
                   j["block"] = to_json(s.block);
                 },
                 [&](const SphericalJoinSpec& s) {
                   j["L"] = s.L;
                   j["xs_chart"] = to_string(s.xs_chart);
                   j["base"] = base(s.base);
                 },
                 [&](const GenHelicoidASpec& s) { j.update(detail::helicoid_a_body(s)); },
                 [&](const GenHelicoidBSpec& s) {
                   j["lambda"] = s.lambda;
                   j["lambda0"] = s.lambda0;
                   j["L"] = s.L;
                   j["block"] = to_json(s.block);
                 },
                 [&](const ChoeHoppeSpec& s) {
                   j["N"] = s.N;
                   j["lambda"] = s.lambda;
                   j["chart"] = to_string(s.chart);
                   j["branch_x"] = s.branch_x;
                   j["branch_y"] = s.branch_y;
                 },
                 [&](const BdjSpec& s) { j["pitch"] = to_json(s.pitch); },
                 [&](const LawsonSurfaceSpec& s) {
                   j["lambda1"] = s.lambda1;
                   j["lambda2"] = s.lambda2;
                 },
                 [&](const HarveyLawsonConeSpec& s) {
                   j["N"] = s.N;
                   j["chart"] = to_string(s.chart);
                 },
                 [&](const SphericalSliceSpec& s) {
                   j["inner"] = to_json(FamilySpec(s.inner));
                   j["p_chart"] = to_string(s.p_chart);
                 },
                 [&](const LatitudeCircleSpec& s) { j["height"] = s.height; },
                 [&](const RoundCylinderSpec& s) { j["radius"] = s.radius; },
                 [&](const UnitSphereSpec& s) {
                   j["N"] = s.N;
                   j["chart"] = to_string(s.chart);
                 },
             },
             spec.value);
  return j;
}

inline FamilySpecPtr read_family(ObjectReader r);

namespace detail {

/// GenHelicoidA: "L", "N", "pitch", and either "blocks" or a shared "chart"
/// (plus optional per-block "unitary_seeds").
inline GenHelicoidASpec read_helicoid_a(ObjectReader& r) {
  GenHelicoidASpec s;
  s.pitch = read_pitch(r.child("pitch"));
  const int l = r.get_or<int>("L", s.pitch.L());
  if (l < 1) throw SpecError(r.field("L") + ": must be >= 1");
  if (s.pitch.L() != l) {
    throw SpecError(r.field("pitch.lambdas") + ": has length " + std::to_string(s.pitch.L()) + " but L = " +
                    std::to_string(l));
  }
  if (r.has("blocks")) {
    const Json& arr = r.raw("blocks");
    if (!arr.is_array()) throw SpecError(r.field("blocks") + ": expected an array");
    for (size_t i = 0; i < arr.size(); ++i) {
      s.blocks.push_back(read_block(ObjectReader(arr[i], r.field("blocks") + "[" + std::to_string(i) + "]")));
    }
    if (static_cast<int>(s.blocks.size()) != l) {
      throw SpecError(r.field("blocks") + ": has " + std::to_string(s.blocks.size()) + " entries but L = " +
                      std::to_string(l));
    }
    if (r.has("N") && r.get<int>("N") != s.blocks.front().N) throw SpecError(r.field("N") + ": disagrees with blocks");
  } else {
    const int n = r.get<int>("N");
    if (n < 0) throw SpecError(r.field("N") + ": must be >= 0");
    const ChartKind kind = read_chart(r, "chart");
    s.blocks.assign(static_cast<size_t>(l), CliffordBlock::standard(n, kind));
    if (r.has("unitary_seeds")) {
      const auto seeds = read_array<std::uint64_t>(r.raw("unitary_seeds"), r.field("unitary_seeds"));
      if (static_cast<int>(seeds.size()) != l) throw SpecError(r.field("unitary_seeds") + ": needs L entries");
      for (int t = 0; t < l; ++t) s.blocks[static_cast<size_t>(t)] = s.blocks[static_cast<size_t>(t)].with_unitary_seed(seeds[static_cast<size_t>(t)]);
    }
  }
  return s;
}

}  // namespace detail

inline FamilySpecPtr read_family(ObjectReader r) {
  const std::string kind = r.get<std::string>("kind");
  FamilySpecPtr out;
  if (kind == "CliffordTorus") {
    out = make_spec(CliffordTorusSpec{read_block(r.child("block"))});
  } else if (kind == "CliffordCone") {
    out = make_spec(CliffordConeSpec{read_block(r.child("block"))});
  } else if (kind == "LRaysCone") {
    const int l = r.get<int>("L");
    out = make_spec(LRaysConeSpec{l, read_family(r.child("base"))});
  } else if (kind == "LRaysCliffordCone") {
    const int l = r.get<int>("L");
    out = make_spec(LRaysCliffordConeSpec{l, read_block(r.child("block"))});
  } else if (kind == "SphericalJoin") {
    SphericalJoinSpec s;
    s.L = r.get<int>("L");
    s.xs_chart = read_chart(r, "xs_chart");
    s.base = read_family(r.child("base"));
    out = make_spec(std::move(s));
  } else if (kind == "GenHelicoidA") {
    out = make_spec(detail::read_helicoid_a(r));
  } else if (kind == "GenHelicoidB") {
    GenHelicoidBSpec s;
    s.lambda = r.get<double>("lambda");
    s.lambda0 = r.get<double>("lambda0");
    s.L = r.get<int>("L");
    s.block = read_block(r.child("block"));
    out = make_spec(std::move(s));
  } else if (kind == "ChoeHoppe") {
    ChoeHoppeSpec s;
    s.N = r.get<int>("N");
    s.lambda = r.get_or<double>("lambda", 1.0);
    s.chart = read_chart(r, "chart");
    s.branch_x = r.get_or<int>("branch_x", 1);
    s.branch_y = r.get_or<int>("branch_y", 1);
    out = make_spec(std::move(s));
  } else if (kind == "BDJ") {
    out = make_spec(BdjSpec{read_pitch(r.child("pitch"))});
  } else if (kind == "LawsonSurface") {
    out = make_spec(LawsonSurfaceSpec{r.get_or<double>("lambda1", 1.0), r.get_or<double>("lambda2", 2.0)});
  } else if (kind == "HarveyLawsonCone") {
    const int n = r.get<int>("N");
    out = make_spec(HarveyLawsonConeSpec{n, read_chart(r, "chart")});
  } else if (kind == "SphericalSlice") {
    ObjectReader inner = r.child("inner");
    if (inner.get<std::string>("kind") != "GenHelicoidA") throw SpecError(r.field("inner.kind") + ": must be GenHelicoidA");
    SphericalSliceSpec s;
    s.inner = detail::read_helicoid_a(inner);
    inner.finish();
    s.p_chart = read_chart(r, "p_chart");
    out = make_spec(std::move(s));
  } else if (kind == "LatitudeCircle") {
    out = make_spec(LatitudeCircleSpec{r.get_or<double>("height", 0.5)});
  } else if (kind == "RoundCylinder") {
    out = make_spec(RoundCylinderSpec{r.get_or<double>("radius", 1.0)});
  } else if (kind == "UnitSphere") {
    const int n = r.get<int>("N");
    out = make_spec(UnitSphereSpec{n, read_chart(r, "chart")});
  } else {
    throw SpecError(r.field("kind") + ": unknown family kind '" + kind + "'");
  }
  r.finish();
  return out;
}

inline FamilySpecPtr family_from_json(const Json& j, const std::string& path = "family") {
  return read_family(ObjectReader(j, path));
}

// ---------------------------------------------------------------------------
// Plans, tolerances, reports
// ---------------------------------------------------------------------------

inline Json to_json(const Box& box) {
  Json arr = Json::array();
  for (const auto& iv : box) arr.push_back(Json::array({number(iv.lo), number(iv.hi)}));
  return arr;
}

inline Box read_box(const Json& v, const std::string& where) {
  if (!v.is_array()) throw SpecError(where + ": expected an array of [lo, hi] pairs");
  Box box;
  for (size_t i = 0; i < v.size(); ++i) {
    const auto pair = read_array<double>(v[i], where + "[" + std::to_string(i) + "]");
    if (pair.size() != 2) throw SpecError(where + "[" + std::to_string(i) + "]: expected [lo, hi]");
    box.push_back({pair[0], pair[1]});
  }
  return box;
}

inline Json to_json(const SamplePlan& p) {
  Json j{{"count", p.count}, {"seed", p.seed}};
  if (!p.box.empty()) j["box"] = to_json(p.box);
  j["max_rejects"] = p.max_rejects;
  j["max_excluded_fraction"] = p.max_excluded_fraction;
  return j;
}

inline SamplePlan read_plan(ObjectReader r) {
  SamplePlan p;
  p.count = r.get_or<int>("count", p.count);
  p.seed = r.get_or<std::uint64_t>("seed", p.seed);
  if (r.has("box")) p.box = read_box(r.raw("box"), r.field("box"));
  p.max_rejects = r.get_or<int>("max_rejects", p.max_rejects);
  p.max_excluded_fraction = r.get_or<double>("max_excluded_fraction", p.max_excluded_fraction);
  r.finish();
  p.validate();
  return p;
}

inline Json to_json(const TolerancePolicy& t) {
  return Json{{"tol_H", t.tol_H},
              {"tol_identity", t.tol_identity},
              {"tol_negative", t.tol_negative},
              {"tol_symmetry", t.tol_symmetry},
              {"tol_cross", t.tol_cross}};
}

inline TolerancePolicy read_tolerances(ObjectReader r) {
  TolerancePolicy t;
  t.tol_H = r.get_or<double>("tol_H", t.tol_H);
  t.tol_identity = r.get_or<double>("tol_identity", t.tol_identity);
  t.tol_negative = r.get_or<double>("tol_negative", t.tol_negative);
  t.tol_symmetry = r.get_or<double>("tol_symmetry", t.tol_symmetry);
  t.tol_cross = r.get_or<double>("tol_cross", t.tol_cross);
  r.finish();
  t.validate();
  return t;
}

inline Json to_json(const CheckResult& c) {
  return Json{{"name", c.name},
              {"verdict", to_string(c.verdict)},
              {"max_residual", number(c.max_residual)},
              {"mean_residual", number(c.mean_residual)},
              {"min_residual", number(c.min_residual)},
              {"max_raw", number(c.max_raw)},
              {"tolerance", number(c.tolerance)},
              {"negative_control", c.negative_control},
              {"points_evaluated", c.points_evaluated},
              {"points_excluded", c.points_excluded}};
}

inline CheckResult read_check(ObjectReader r) {
  CheckResult c;
  c.name = r.get<std::string>("name");
  c.verdict = verdict_from_string(r.get<std::string>("verdict"));
  c.max_residual = r.get<double>("max_residual");
  c.mean_residual = r.get<double>("mean_residual");
  c.min_residual = r.get<double>("min_residual");
  c.max_raw = r.get<double>("max_raw");
  c.tolerance = r.get<double>("tolerance");
  c.negative_control = r.get<bool>("negative_control");
  c.points_evaluated = r.get<long long>("points_evaluated");
  c.points_excluded = r.get<long long>("points_excluded");
  r.finish();
  return c;
}

inline Json to_json(const VerificationReport& rep) {
  Json j{{"version", kSchemaVersion}, {"engine_version", rep.engine_version}, {"campaign", rep.campaign}};
  j["family"] = rep.spec ? to_json(*rep.spec) : Json();
  j["plan"] = to_json(rep.plan);
  j["tolerances"] = to_json(rep.tolerances);
  Json checks = Json::array();
  for (const auto& c : rep.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  if (rep.verdicts_agree) j["verdicts_agree"] = *rep.verdicts_agree;
  j["all_expected"] = rep.all_expected();
  if (rep.wall_time) j["wall_time"] = *rep.wall_time;
  return j;
}

inline void check_version(ObjectReader& r) {
  const int v = r.get<int>("version");
  if (v != kSchemaVersion) throw SpecError(r.field("version") + ": unsupported schema version " + std::to_string(v));
}

inline VerificationReport report_from_json(const Json& j) {
  ObjectReader r(j, "");
  check_version(r);
  VerificationReport rep;
  rep.engine_version = r.get<std::string>("engine_version");
  rep.campaign = r.get<std::string>("campaign");
  rep.spec = read_family(r.child("family"));
  rep.plan = read_plan(r.child("plan"));
  rep.tolerances = read_tolerances(r.child("tolerances"));
  const Json& checks = r.raw("checks");
  if (!checks.is_array()) throw SpecError("checks: expected an array");
  for (size_t i = 0; i < checks.size(); ++i) {
    rep.checks.push_back(read_check(ObjectReader(checks[i], "checks[" + std::to_string(i) + "]")));
  }
  if (r.has("verdicts_agree")) rep.verdicts_agree = r.get<bool>("verdicts_agree");
  (void)r.get<bool>("all_expected");  // derived
  if (r.has("wall_time")) rep.wall_time = r.get<double>("wall_time");
  r.finish();
  return rep;
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(what + ": invalid JSON (" + e.what() + ")");
  }
}

}  // namespace minvar::io
