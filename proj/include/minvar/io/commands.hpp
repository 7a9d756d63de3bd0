#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>

#include "minvar/errors.hpp"
#include "minvar/families/build.hpp"
#include "minvar/harness.hpp"
#include "minvar/io/config.hpp"
#include "minvar/io/csv.hpp"
#include "minvar/io/json.hpp"
#include "minvar/io/mesh.hpp"

namespace minvar::io {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitConfig = 2;

/// Command-line values that shadow config fields.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  std::optional<std::string> out;
  bool timing = false;
};

struct CommandStreams {
  std::ostream& out = std::cout;
  std::ostream& err = std::cerr;
};

namespace detail {

inline RunConfig load_with_overrides(const std::string& path, const Overrides& ov) {
  RunConfig c = load_config(path);
  if (ov.seed) c.plan.seed = *ov.seed;
  if (ov.points) c.plan.count = *ov.points;
  c.plan.validate();
  return c;
}

inline void emit(const std::optional<std::string>& path, const std::string& text, std::ostream& fallback) {
  if (path) {
    write_file(*path, text);
  } else {
    fallback << text;
  }
}

inline void summarize(const VerificationReport& r, std::ostream& os) {
  for (const auto& c : r.checks) {
    os << c.name << ' ' << to_string(c.verdict) << " max=" << format_double(c.max_residual)
       << " tol=" << format_double(c.tolerance) << '\n';
  }
}

inline int finish_report(VerificationReport& report, const RunConfig& cfg, const Overrides& ov, double seconds,
                         const CommandStreams& io) {
  if (ov.timing) {
    report.wall_time = seconds;
  } else {
    report.wall_time.reset();
  }
  const auto path = ov.out ? ov.out : cfg.output.report;
  if (path) {
    write_file(*path, to_json(report).dump(2) + "\n");
    summarize(report, io.out);
  } else {
    io.out << to_json(report).dump(2) << '\n';
  }
  const bool agree = !report.verdicts_agree || *report.verdicts_agree;
  return report.all_expected() && agree ? kExitOk : kExitMismatch;
}

/// Maps every configuration or domain failure to exit code 2.
template <class F>
int guarded(const CommandStreams& io, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    io.err << "minvar: error: " << e.what() << '\n';
    return kExitConfig;
  }
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Runs the verification campaigns named in `checks` (default: minimality)
/// and writes one combined report whose check names carry the campaign as a
/// prefix, e.g. "screw:screw_invariance".
inline int cmd_verify(const std::string& config_path, const Overrides& ov = {}, const CommandStreams& io = {}) {
  return detail::guarded(io, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig cfg = detail::load_with_overrides(config_path, ov);
    std::vector<std::string> checks = cfg.checks.empty() ? std::vector<std::string>{"minimality"} : cfg.checks;
    for (const auto& c : checks) {
      const auto& names = verify_check_names();
      if (std::find(names.begin(), names.end(), c) == names.end()) {
        throw SpecError("checks: '" + c + "' is an identity check; use the identities command");
      }
    }
    VerificationReport report = minvar::detail::start_report("verify", cfg.family, cfg.plan, cfg.tolerances);
    const auto absorb = [&report](const std::string& prefix, const VerificationReport& r) {
      for (auto c : r.checks) {
        c.name = prefix + ":" + c.name;
        report.checks.push_back(std::move(c));
      }
      if (r.verdicts_agree) report.verdicts_agree = *r.verdicts_agree;
    };
    for (const auto& c : checks) {
      if (c == "minimality") {
        absorb(c, verify_minimality(cfg.family, cfg.plan, cfg.tolerances));
      } else if (c == "screw") {
        absorb(c, verify_screw_invariance(cfg.family, cfg.plan, cfg.tolerances));
      } else if (c == "cone_scaling") {
        absorb(c, verify_cone_scaling(cfg.family, cfg.plan, cfg.tolerances));
      } else if (c == "takahashi") {
        absorb(c, takahashi_equivalence(cfg.family, cfg.takahashi.L, cfg.plan, cfg.tolerances,
                                        cfg.takahashi.xs_chart));
      } else if (c == "graph_pde") {
        const auto* ch = cfg.family->get_if<ChoeHoppeSpec>();
        if (!ch) throw SpecError("checks: graph_pde needs a ChoeHoppe family");
        absorb(c, verify_graph_pde(ch->N, cfg.plan, cfg.tolerances));
      }
    }
    return detail::finish_report(report, cfg, ov, detail::seconds_since(t0), io);
  });
}

/// Three-way Takahashi check with the config family as the spherical base.
inline int cmd_takahashi(const std::string& config_path, const Overrides& ov = {}, const CommandStreams& io = {}) {
  return detail::guarded(io, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig cfg = detail::load_with_overrides(config_path, ov);
    VerificationReport report =
        takahashi_equivalence(cfg.family, cfg.takahashi.L, cfg.plan, cfg.tolerances, cfg.takahashi.xs_chart);
    return detail::finish_report(report, cfg, ov, detail::seconds_since(t0), io);
  });
}

/// Identity residuals: report JSON plus a per-point CSV table.
inline int cmd_identities(const std::string& config_path, const Overrides& ov = {}, const CommandStreams& io = {}) {
  return detail::guarded(io, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig cfg = detail::load_with_overrides(config_path, ov);
    if (cfg.checks.empty()) throw SpecError("checks: empty check list");
    IdentityRun run = verify_identities(cfg.family, cfg.checks, cfg.plan, cfg.tolerances);
    if (cfg.output.csv) write_file(*cfg.output.csv, to_csv(run.table));
    return detail::finish_report(run.report, cfg, ov, detail::seconds_since(t0), io);
  });
}

/// OBJ tessellation of the config family.
inline int cmd_mesh(const std::string& config_path, const Overrides& ov = {}, const CommandStreams& io = {}) {
  return detail::guarded(io, [&] {
    const RunConfig cfg = detail::load_with_overrides(config_path, ov);
    const Immersion imm = build_immersion(*cfg.family);
    const TriangleMesh mesh = tessellate(imm, cfg.mesh);
    detail::emit(ov.out ? ov.out : cfg.output.mesh, to_obj(mesh), io.out);
    return kExitOk;
  });
}

}  // namespace minvar::io
