#include <cstdint>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "minvar/io/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"minvar: numerical certification of minimal submanifolds"};
  app.set_version_flag("--version", std::string(minvar::kEngineVersion));
  app.require_subcommand(1);

  std::string config;
  std::uint64_t seed = 0;
  int points = 0;
  std::string out;
  bool timing = false;

  const auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", config, "JSON run configuration")->required();
    sub->add_option("--seed", seed, "override plan.seed");
    sub->add_option("--points", points, "override plan.count")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "override the output path");
    sub->add_flag("--timing", timing, "record wall time in the report");
    return sub;
  };
  CLI::App* verify = add("verify", "run minimality and symmetry campaigns");
  CLI::App* identities = add("identities", "evaluate identity residuals");
  CLI::App* mesh = add("mesh", "export an OBJ mesh");
  CLI::App* takahashi = add("takahashi", "sphere / join / cone equivalence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : minvar::io::kExitConfig;
  }

  minvar::io::Overrides ov;
  ov.timing = timing;
  const auto given = [](CLI::App* sub, const char* opt) { return sub->count(opt) > 0; };
  for (CLI::App* sub : {verify, identities, mesh, takahashi}) {
    if (!sub->parsed()) continue;
    if (given(sub, "--seed")) ov.seed = seed;
    if (given(sub, "--points")) ov.points = points;
    if (given(sub, "--out")) ov.out = out;
    if (sub == verify) return minvar::io::cmd_verify(config, ov);
    if (sub == identities) return minvar::io::cmd_identities(config, ov);
    if (sub == mesh) return minvar::io::cmd_mesh(config, ov);
    return minvar::io::cmd_takahashi(config, ov);
  }
  return minvar::io::kExitConfig;
}
