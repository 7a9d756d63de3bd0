#pragma once

#include <algorithm>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "minvar/errors.hpp"
#include "minvar/families/build.hpp"
#include "minvar/families/family_spec.hpp"
#include "minvar/harness/campaigns.hpp"
#include "minvar/harness/plan.hpp"
#include "minvar/harness/report.hpp"
#include "minvar/identities.hpp"

namespace minvar {

/// Per-point residuals, one row per sample point, first column the point index.
struct ResidualTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline const std::vector<std::string>& identity_check_names() {
  static const std::vector<std::string> names{"lemma", "helicoid_algebra", "theta_harmonicity", "proof_terms"};
  return names;
}

struct IdentityRun {
  VerificationReport report;
  ResidualTable table;
};

namespace detail {

struct IdentityColumn {
  std::string name;
  double tolerance;
  ResidualStats stats;
};

}  // namespace detail

/// Evaluates the requested identity groups at plan.count sampled points.
/// "lemma" runs on a CliffordTorus spec or on every block of a GenHelicoidA
/// spec; the other groups need a GenHelicoidA spec.
inline IdentityRun verify_identities(const FamilySpecPtr& spec, const std::vector<std::string>& checks,
                                     const SamplePlan& plan, const TolerancePolicy& tol) {
  if (checks.empty()) throw SpecError("identities: empty check list");
  const std::set<std::string> known(identity_check_names().begin(), identity_check_names().end());
  for (const auto& c : checks) {
    if (!known.count(c)) throw SpecError("identities: unknown check '" + c + "'");
  }
  const auto wants = [&checks](const std::string& c) { return std::find(checks.begin(), checks.end(), c) != checks.end(); };

  IdentityRun run;
  run.report = detail::start_report("identities", spec, plan, tol);
  const auto* torus = spec->get_if<CliffordTorusSpec>();
  const auto* helicoid = spec->get_if<GenHelicoidASpec>();
  if (!torus && !helicoid) throw SpecError("identities: family must be CliffordTorus or GenHelicoidA");
  if (!helicoid && (wants("helicoid_algebra") || wants("theta_harmonicity") || wants("proof_terms"))) {
    throw SpecError("identities: helicoid checks need a GenHelicoidA family");
  }

  std::vector<detail::IdentityColumn> cols;
  const auto add_col = [&cols](const std::string& name, double t) { cols.push_back({name, t, {}}); };
  if (wants("lemma")) {
    for (const char* n : {"lemma_a1", "lemma_a2", "lemma_b", "lemma_c", "lemma_d", "lemma_e", "lemma_e_derivative"}) {
      add_col(n, tol.tol_identity);
    }
  }
  if (wants("helicoid_algebra")) {
    add_col("metric_blocks", tol.tol_identity);
    add_col("det_factorization", tol.tol_identity);
    add_col("sqrtG_factorization", tol.tol_identity);
    add_col("P_identity", tol.tol_identity);
    add_col("inverse_metric", tol.tol_identity);
  }
  if (wants("theta_harmonicity")) {
    add_col("theta_laplacian", tol.tol_H);
    add_col("block_sums", tol.tol_H);
  }
  if (wants("proof_terms")) {
    add_col("proof_cancellation", tol.tol_H);
    add_col("proof_cross_check", tol.tol_cross);
    add_col("proof_pieces", tol.tol_cross);
  }

  const Immersion imm = build_immersion(*spec);
  const SampleSet samples = sample_points(imm, plan, 10);
  run.table.columns.push_back("point");
  for (const auto& c : cols) run.table.columns.push_back(c.name);

  for (size_t i = 0; i < samples.points.size(); ++i) {
    const std::span<const double> p(samples.points[i]);
    std::vector<double> row;
    if (wants("lemma")) {
      LemmaResiduals worst;
      const auto fold = [&worst](const LemmaResiduals& r) {
        worst.res_a1 = std::max(worst.res_a1, r.res_a1);
        worst.res_a2 = std::max(worst.res_a2, r.res_a2);
        worst.res_b = std::max(worst.res_b, r.res_b);
        worst.res_c = std::max(worst.res_c, r.res_c);
        worst.res_d = std::max(worst.res_d, r.res_d);
        worst.res_e = std::max(worst.res_e, r.res_e);
        worst.res_e_derivative = std::max(worst.res_e_derivative, r.res_e_derivative);
      };
      if (torus) {
        fold(lemma_magic_residuals(torus->block, p));
      } else {
        const int w = 2 * helicoid->blocks.front().N;
        for (size_t s = 0; s < helicoid->blocks.size(); ++s) {
          fold(lemma_magic_residuals(helicoid->blocks[s], p.subspan(s * static_cast<size_t>(w), static_cast<size_t>(w))));
        }
      }
      for (double v : {worst.res_a1, worst.res_a2, worst.res_b, worst.res_c, worst.res_d, worst.res_e,
                       worst.res_e_derivative}) {
        row.push_back(v);
      }
    }
    if (wants("helicoid_algebra")) {
      const HelicoidAlgebra alg = helicoid_algebra(*helicoid, p);
      for (double v : {alg.metric_defect, alg.det_defect, alg.sqrtG_defect, alg.P_defect, alg.inverse_defect}) {
        row.push_back(v);
      }
    }
    if (wants("theta_harmonicity")) {
      const ThetaHarmonicity h = theta_harmonicity(*helicoid, p);
      row.push_back(h.relative);
      row.push_back(h.block_defect);
    }
    if (wants("proof_terms")) {
      double sum = 0.0;
      double cross = 0.0;
      double pieces = 0.0;
      for (int t = 0; t < helicoid->pitch.L(); ++t) {
        const ProofTerms pt = proof_terms(*helicoid, t, p);
        sum = std::max(sum, pt.sum_relative);
        cross = std::max(cross, pt.cross_check);
        pieces = std::max(pieces, pt.max_piece_defect());
      }
      row.push_back(sum);
      row.push_back(cross);
      row.push_back(pieces);
    }
    for (size_t k = 0; k < cols.size(); ++k) cols[k].stats.add(row[k]);
    row.insert(row.begin(), static_cast<double>(i));
    run.table.rows.push_back(std::move(row));
  }
  for (auto& c : cols) run.report.checks.push_back(c.stats.finish(c.name, c.tolerance, false, tol, samples.excluded));
  return run;
}

}  // namespace minvar
