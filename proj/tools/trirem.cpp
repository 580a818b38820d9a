// Command-line front end. Exit codes: 0 success, 2 gate failure, 1 error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trirem/errors.hpp"
#include "trirem/extgraph.hpp"
#include "trirem/harness.hpp"
#include "trirem/homcount.hpp"
#include "trirem/ladders.hpp"

using namespace trirem;
using nlohmann::json;

namespace {

constexpr int kGateFailure = 2;

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

json rational_json(const Rational& r) { return r.to_string(); }

int simulate(std::uint64_t n, std::uint64_t seed, double dp, std::optional<double> permutation_at,
             std::optional<double> certify_at, std::uint64_t pair_sample, bool full_scan, const std::string& output) {
  ExperimentConfig c;
  c.ns = {n};
  c.seeds = {seed};
  c.snapshot_dp = dp;
  c.permutation_at_p = permutation_at;
  c.certify_at_p = certify_at;
  c.pair_sample = pair_sample;
  c.full_scan = full_scan;
  c.output_dir = output;
  const auto out = run_experiment(c);
  emit(run_summary_json(out.runs.at(0), &c));
  return 0;
}

int ensemble(const std::string& path, const std::vector<std::string>& overrides, const std::string& output,
             unsigned workers) {
  auto c = load_experiment_config(path);
  for (const auto& o : overrides) apply_override(c, o);
  if (!output.empty()) c.output_dir = output;
  if (workers > 0) c.workers = workers;
  const auto out = run_experiment(c);
  emit(aggregate_json(out.aggregate, &c));
  return 0;
}

int ladders(int M, bool classify) {
  json words = json::array();
  for (const auto& w : enumerate_bounded_family(M)) {
    json row = {{"word", w}, {"length", w.size()}, {"e_count", count_e(w)}, {"omega", omega(w, M)}};
    if (classify) {
      json edges = json::array();
      for (const auto& [y, z] : cached_ladder(w).edges) {
        const auto info = classify_edge(w, y, z, M);
        edges.push_back({{"y", y}, {"z", z}, {"class", edge_class_name(info.cls)}, {"root_edge", info.root_edge}});
      }
      row["edges"] = std::move(edges);
    }
    words.push_back(std::move(row));
  }
  emit({{"schema_version", kSchemaVersion}, {"M", M}, {"count", words.size()}, {"words", std::move(words)}});
  return 0;
}

int verify_balance(int M) {
  json rows = json::array();
  bool ok = true;
  const Rational target(2 * M - 1, M - 1);
  for (const auto& w : enumerate_bounded_family(M)) {
    for (const auto& [y, z] : cached_ladder(w).edges) {
      if (classify_edge(w, y, z, M).cls != EdgeClass::outer_boundary) continue;
      const auto b = backward_extension(w, y, z, M);
      const bool balanced = is_balanced(b);
      const auto m = density(b);
      ok = ok && balanced && m == target;
      const auto s = scaling(b);
      rows.push_back({{"word", w}, {"y", y}, {"z", z}, {"balanced", balanced}, {"density", rational_json(m)},
                      {"n_exp", s.n_exp}, {"p_exp", s.p_exp}});
    }
  }
  emit({{"schema_version", kSchemaVersion},
        {"M", M},
        {"expected_density", rational_json(target)},
        {"extensions", rows.size()},
        {"all_balanced_at_expected_density", ok},
        {"rows", std::move(rows)}});
  return ok ? 0 : kGateFailure;
}

int hom_audit_cmd(std::uint64_t n, const HomAuditConfig& cfg, const std::string& output) {
  const auto r = hom_audit(n, cfg);
  const auto text = audit_report_json(r);
  if (!output.empty()) write_text_file(output, text + "\n");
  std::cout << text << '\n';
  return r.exceeded() ? kGateFailure : 0;
}

Aggregate load_aggregate(const std::string& input) {
  std::filesystem::path path(input);
  if (std::filesystem::is_directory(path)) path /= "aggregate.json";
  return parse_aggregate(json::parse(read_text_file(path.string())));
}

int exponent_fit_cmd(const std::string& input, double slope_min, double slope_max, double r2_min) {
  const auto agg = load_aggregate(input);
  std::vector<std::pair<double, double>> points;
  for (const auto& s : agg.sizes) points.emplace_back(double(s.n), s.mean_final_edges);
  const auto fit = fit_exponent(points);
  const bool ok = fit.slope >= slope_min && fit.slope <= slope_max && fit.r2 >= r2_min;
  emit({{"schema_version", kSchemaVersion},
        {"points", points.size()},
        {"slope", fit.slope},
        {"intercept", fit.intercept},
        {"r2", fit.r2},
        {"gate", {{"slope_min", slope_min}, {"slope_max", slope_max}, {"r2_min", r2_min}, {"pass", ok}}}});
  return ok ? 0 : kGateFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random greedy triangle removal: simulation, ladder combinatorics and audits"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Run one process and print its JSON summary");
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double dp = 0.01;
  std::optional<double> permutation_at;
  std::optional<double> certify_at;
  std::uint64_t pair_sample = 0;
  bool full_scan = false;
  std::string output;
  sim->add_option("--n", n, "Number of vertices")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 20));
  sim->add_option("--seed", seed, "Random seed")->required();
  sim->add_option("--snapshot-dp", dp, "Snapshot spacing in edge density")->check(CLI::Range(0.0, 1.0));
  sim->add_option("--permutation-at", permutation_at, "Switch to permutation mode at this edge density")
      ->check(CLI::Range(0.0, 1.0));
  sim->add_option("--certify-at", certify_at, "Start survivor certificates at this edge density")
      ->check(CLI::Range(0.0, 1.0));
  sim->add_option("--pair-sample", pair_sample, "Co-degree pairs per snapshot (0 = automatic)");
  sim->add_flag("--full-scan", full_scan, "Scan every pair at each snapshot");
  sim->add_option("--output", output, "Directory for the CSV and JSON files");

  auto* ens = app.add_subcommand("ensemble", "Run a configured ensemble and print the aggregate");
  std::string config_path;
  std::vector<std::string> overrides;
  unsigned workers = 0;
  ens->add_option("--config", config_path, "key = value configuration file")->required()->check(CLI::ExistingFile);
  ens->add_option("--set", overrides, "Override a configuration key (key=value), repeatable");
  ens->add_option("--output", output, "Output directory (overrides the file)");
  ens->add_option("--workers", workers, "Worker threads (overrides the file)");

  auto* lad = app.add_subcommand("ladders", "List the M-bounded family of ladder words");
  int M = 3;
  bool list = false;
  bool classify = false;
  lad->add_option("--M", M, "Family bound (>= 3)")->required();
  auto* list_flag = lad->add_flag("--list", list, "Words only (default)");
  lad->add_flag("--classify", classify, "Include the class of every ladder edge")->excludes(list_flag);

  auto* bal = app.add_subcommand("verify-balance", "Check every backward extension of the M-bounded family");
  bal->add_option("--M", M, "Family bound (>= 3)")->required();

  auto* aud = app.add_subcommand("hom-audit", "Audit the X-variable envelope along one run");
  HomAuditConfig audit;
  std::uint64_t audit_n = 0;
  aud->add_option("--n", audit_n, "Number of vertices")->required();
  aud->add_option("--M", audit.M, "Family bound (>= 3)");
  aud->add_option("--p-min", audit.p_min, "Audit snapshots with p at least this")->check(CLI::Range(0.0, 1.0));
  aud->add_option("--pairs", audit.pair_count, "Root pairs per snapshot");
  aud->add_option("--max-length", audit.max_word_length, "Longest audited word");
  aud->add_option("--seed", audit.seed, "Random seed");
  aud->add_option("--snapshot-dp", audit.snapshot_dp, "Snapshot spacing in edge density");
  aud->add_option("--output", output, "Also write the report to this file");

  auto* fit = app.add_subcommand("exponent-fit", "Fit the growth exponent of mean final edges");
  std::string input;
  double slope_min = 1.35;
  double slope_max = 1.65;
  double r2_min = 0.98;
  fit->add_option("--input", input, "aggregate.json or the ensemble output directory")->required();
  fit->add_option("--slope-min", slope_min, "Lower slope gate");
  fit->add_option("--slope-max", slope_max, "Upper slope gate");
  fit->add_option("--r2-min", r2_min, "Minimum r^2");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return simulate(n, seed, dp, permutation_at, certify_at, pair_sample, full_scan, output);
    if (*ens) return ensemble(config_path, overrides, output, workers);
    if (*lad) return ladders(M, classify);
    if (*bal) return verify_balance(M);
    if (*aud) return hom_audit_cmd(audit_n, audit, output);
    if (*fit) return exponent_fit_cmd(input, slope_min, slope_max, r2_min);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
