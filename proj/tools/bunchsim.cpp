// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: rebuilds the bunching experiments from flags and
// emits CSV/JSON tables plus an optional reproduction manifest.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bunching/circuits.hpp"
#include "bunching/distinguishability.hpp"
#include "bunching/experiments.hpp"
#include "bunching/interferometry.hpp"
#include "bunching/permanent.hpp"
#include "bunching/report.hpp"

namespace {

using bunching::format_significant;

constexpr double kDruryTarget = 1237.0 / 1152.0;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CommonOutput {
  std::string out_path;
  std::string format = "csv";
  bool json_stdout = false;
  std::string manifest_path;
  int threads = 0;
};

void add_output_options(CLI::App* cmd, CommonOutput& common, bool with_format = true) {
  cmd->add_option("--out", common.out_path, "Write the result table to this file");
  if (with_format) {
    cmd->add_option("--format", common.format, "File format for --out")
        ->check(CLI::IsMember({"csv", "json"}));
  }
  cmd->add_flag("--json", common.json_stdout, "Print a machine-readable report to stdout");
  cmd->add_option("--manifest", common.manifest_path, "Write a reproduction manifest here");
  cmd->add_option("--threads", common.threads,
                  "Worker cap (default: BUNCHSIM_THREADS or hardware)");
}

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return kExitUsage;
}

// Writes --out / --json / default stdout / --manifest for one command.
int emit(const CommonOutput& common, const std::string& command,
         std::map<std::string, std::string> parameters, std::uint64_t seed,
         const std::string& csv_content, const nlohmann::json& report,
         const std::string& stdout_text) {
  bunching::RunManifest manifest;
  manifest.command = command;
  manifest.parameters = std::move(parameters);
  manifest.seed = seed;
  if (!common.out_path.empty()) {
    const std::string content =
        common.format == "json" ? report.dump(2) + "\n" : csv_content;
    bunching::write_text_file(common.out_path, content);
    manifest.outputs.push_back(common.out_path);
    manifest.checksums[common.out_path] = bunching::fnv1a64_hex(content);
  }
  if (common.json_stdout) {
    std::cout << report.dump(2) << "\n";
  } else if (common.out_path.empty()) {
    std::cout << stdout_text;
  }
  if (!common.manifest_path.empty()) {
    bunching::write_text_file(common.manifest_path, bunching::manifest_to_json(manifest));
  }
  return kExitPass;
}

bool parse_eps_grid(const std::string& spec, std::vector<double>& epsilons) {
  const std::size_t first = spec.find(':');
  const std::size_t second = spec.find(':', first == std::string::npos ? first : first + 1);
  if (first == std::string::npos || second == std::string::npos) return false;
  double begin = 0.0, end = 0.0, step = 0.0;
  try {
    begin = std::stod(spec.substr(0, first));
    end = std::stod(spec.substr(first + 1, second - first - 1));
    step = std::stod(spec.substr(second + 1));
  } catch (...) {
    return false;
  }
  if (begin < 0.0 || end < begin) return false;
  if (begin == end) {
    epsilons = {begin};
    return true;
  }
  if (step <= 0.0) return false;
  for (double eps = begin; eps <= end + 1e-12; eps += step) epsilons.push_back(eps);
  return !epsilons.empty();
}

int run_drury_check(bool naive_oracle, const CommonOutput& common) {
  const auto [a, m] = bunching::drury_matrices();
  const bunching::ComplexMatrix product =
      bunching::hadamard_product(a.matrix, a.matrix.transpose());
  const double perm_a = naive_oracle ? bunching::permanent_naive(a.matrix).real()
                                     : bunching::permanent_ryser(a.matrix).real();
  const double perm_product = naive_oracle ? bunching::permanent_naive(product).real()
                                           : bunching::permanent_ryser(product).real();
  const double ratio = perm_product / perm_a;
  const bool pass = std::abs(ratio - kDruryTarget) < 1e-9 * kDruryTarget;

  nlohmann::json report;
  report["command"] = "drury-check";
  report["oracle"] = naive_oracle ? "naive" : "ryser";
  report["perm_a"] = perm_a;
  report["perm_a_hadamard_at"] = perm_product;
  report["ratio"] = ratio;
  report["target"] = kDruryTarget;
  report["pass"] = pass;
  report["version"] = bunching::kArtifactVersion;

  if (common.json_stdout) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << "perm(A o A^T) = " << format_significant(perm_product) << "\n"
              << "perm(A)       = " << format_significant(perm_a) << "\n"
              << "ratio         = " << format_significant(ratio) << "\n"
              << "target        = " << format_significant(kDruryTarget) << " (1237/1152)\n"
              << (pass ? "PASS" : "FAIL") << "\n";
  }
  if (!common.manifest_path.empty()) {
    bunching::RunManifest manifest;
    manifest.command = "drury-check";
    manifest.parameters["oracle"] = naive_oracle ? "naive" : "ryser";
    bunching::write_text_file(common.manifest_path, bunching::manifest_to_json(manifest));
  }
  return pass ? kExitPass : kExitFail;
}

int run_ratio(int n_min, int n_max, double eta, const CommonOutput& common) {
  if (n_min < 4 || n_min > n_max || n_max > 30) {
    return usage_error("ratio: need 4 <= n-min <= n-max <= 30");
  }
  const std::vector<bunching::RatioResult> rows = bunching::ratio_scan(n_min, n_max, eta);

  std::string csv = bunching::csv_line({"n", "P_bos", "P_star", "R", "bound"});
  nlohmann::json json_rows = nlohmann::json::array();
  for (const auto& row : rows) {
    csv += bunching::csv_line({std::to_string(row.n), format_significant(row.p_bos),
                               format_significant(row.p_star), format_significant(row.ratio),
                               format_significant(row.bound)});
    json_rows.push_back({{"n", row.n},
                         {"eta", row.eta},
                         {"P_bos", row.p_bos},
                         {"P_star", row.p_star},
                         {"R", row.ratio},
                         {"bound", row.bound}});
  }

  nlohmann::json report;
  report["command"] = "ratio";
  report["n_min"] = n_min;
  report["n_max"] = n_max;
  report["eta"] = eta > 0.0 ? nlohmann::json(eta) : nlohmann::json("2/n");
  report["rows"] = json_rows;
  report["version"] = bunching::kArtifactVersion;

  std::map<std::string, std::string> parameters{
      {"n_min", std::to_string(n_min)},
      {"n_max", std::to_string(n_max)},
      {"eta", eta > 0.0 ? format_significant(eta) : "2/n"}};
  return emit(common, "ratio", std::move(parameters), 0, csv, report, csv);
}

int run_distribution(int n, const std::string& input, const CommonOutput& common) {
  if (n < 4 || n > 9) return usage_error("distribution: need 4 <= n <= 9");
  bunching::InputKind kind;
  try {
    kind = bunching::parse_input_kind(input);
  } catch (const std::exception& e) {
    return usage_error(e.what());
  }
  const bunching::DistributionResult result = bunching::distribution_experiment(n, kind);

  std::string csv = "# total_bunching_probability=" +
                    format_significant(result.bunching_probability) + "\n";
  csv += bunching::csv_line({"j", "conditional_p", "absolute_p"});
  nlohmann::json json_rows = nlohmann::json::array();
  for (const auto& row : result.rows) {
    csv += bunching::csv_line({std::to_string(row.j), format_significant(row.conditional_p),
                               format_significant(row.absolute_p)});
    json_rows.push_back({{"j", row.j},
                         {"conditional_p", row.conditional_p},
                         {"absolute_p", row.absolute_p}});
  }

  nlohmann::json report;
  report["command"] = "distribution";
  report["n"] = n;
  report["input"] = input;
  report["bunching_probability"] = result.bunching_probability;
  report["rows"] = json_rows;
  report["version"] = bunching::kArtifactVersion;

  std::map<std::string, std::string> parameters{{"n", std::to_string(n)}, {"input", input}};
  return emit(common, "distribution", std::move(parameters), 0, csv, report, csv);
}

int run_perturb(const std::string& target_name, const std::string& grid_spec,
                std::uint64_t samples, std::uint64_t seed, const CommonOutput& common) {
  bunching::PerturbationTarget target;
  try {
    target = bunching::parse_perturbation_target(target_name);
  } catch (const std::exception& e) {
    return usage_error(e.what());
  }
  std::vector<double> epsilons;
  if (!parse_eps_grid(grid_spec, epsilons)) {
    return usage_error("perturb: malformed --eps-grid, expected a:b:step");
  }
  if (samples < 1) return usage_error("perturb: need --samples >= 1");

  const std::vector<bunching::PerturbationPoint> points =
      bunching::perturbation_sweep(target, epsilons, samples, seed, common.threads);

  std::string csv = bunching::csv_line({"epsilon", "mean_R", "std_R", "frac_violating"});
  nlohmann::json json_rows = nlohmann::json::array();
  for (const auto& point : points) {
    csv += bunching::csv_line({format_significant(point.epsilon),
                               format_significant(point.mean_ratio),
                               format_significant(point.std_ratio),
                               format_significant(point.frac_violating)});
    json_rows.push_back({{"epsilon", point.epsilon},
                         {"mean_R", point.mean_ratio},
                         {"std_R", point.std_ratio},
                         {"frac_violating", point.frac_violating}});
  }

  nlohmann::json report;
  report["command"] = "perturb";
  report["target"] = target_name;
  report["samples"] = samples;
  report["seed"] = seed;
  report["rows"] = json_rows;
  report["version"] = bunching::kArtifactVersion;

  std::map<std::string, std::string> parameters{{"target", target_name},
                                                {"eps_grid", grid_spec},
                                                {"samples", std::to_string(samples)},
                                                {"seed", std::to_string(seed)}};
  return emit(common, "perturb", std::move(parameters), seed, csv, report, csv);
}

int run_search(int n, int rank, std::uint64_t samples, std::uint64_t seed, bool plant_drury,
               int subset_size, const CommonOutput& common) {
  if (n < 1 || n > 10) return usage_error("search: need 1 <= n <= 10");
  if (rank < 1 || rank > n) return usage_error("search: need 1 <= rank <= n");

  const bunching::SearchSummary summary = bunching::counterexample_search(
      n, rank, samples, seed, plant_drury, subset_size, common.threads);

  nlohmann::json report;
  report["command"] = "search";
  report["n"] = n;
  report["rank"] = rank;
  report["samples"] = summary.samples;
  report["violations"] = summary.violations;
  report["max_ratio"] = summary.max_ratio;
  report["seed"] = summary.seed;
  if (plant_drury) report["planted_violation"] = summary.planted_detected;
  report["version"] = bunching::kArtifactVersion;
  const std::string content = report.dump(2) + "\n";

  bunching::RunManifest manifest;
  manifest.command = "search";
  manifest.parameters = {{"n", std::to_string(n)},
                         {"rank", std::to_string(rank)},
                         {"samples", std::to_string(samples)},
                         {"seed", std::to_string(seed)},
                         {"plant_drury", plant_drury ? "true" : "false"}};
  manifest.seed = seed;
  if (!common.out_path.empty()) {
    bunching::write_text_file(common.out_path, content);
    manifest.outputs.push_back(common.out_path);
    manifest.checksums[common.out_path] = bunching::fnv1a64_hex(content);
  }
  if (common.json_stdout || common.out_path.empty()) std::cout << content;
  if (!common.manifest_path.empty()) {
    bunching::write_text_file(common.manifest_path, bunching::manifest_to_json(manifest));
  }

  if (plant_drury && !summary.planted_detected) {
    std::cerr << "error: planted instance was not flagged\n";
    return kExitFail;
  }
  return kExitPass;
}

int run_ternary(double grid_step, const CommonOutput& common) {
  if (!(grid_step > 0.0) || grid_step > 0.5) {
    return usage_error("ternary: --grid-step must lie in (0, 0.5]");
  }
  const std::vector<bunching::TernaryPoint> points = bunching::ternary_scan(grid_step);

  std::string csv = bunching::csv_line({"x", "y", "ratio", "log10_ratio"});
  nlohmann::json json_rows = nlohmann::json::array();
  for (const auto& point : points) {
    csv += bunching::csv_line({format_significant(point.x), format_significant(point.y),
                               format_significant(point.ratio),
                               format_significant(point.log10_ratio)});
    json_rows.push_back({{"x", point.x},
                         {"y", point.y},
                         {"ratio", point.ratio},
                         {"log10_ratio", point.log10_ratio}});
  }

  nlohmann::json report;
  report["command"] = "ternary";
  report["grid_step"] = grid_step;
  report["rows"] = json_rows;
  report["version"] = bunching::kArtifactVersion;

  std::map<std::string, std::string> parameters{{"grid_step", format_significant(grid_step)}};
  return emit(common, "ternary", std::move(parameters), 0, csv, report, csv);
}

int run_stability(int n, int trials, std::uint64_t seed, const CommonOutput& common) {
  if (n < 4 || n > 14) return usage_error("stability: need 4 <= n <= 14");
  if (trials < 1) return usage_error("stability: need --trials >= 1");
  const std::vector<double> norms = bunching::stability_trials(n, trials, seed);

  double max_norm = 0.0;
  std::string csv = bunching::csv_line({"trial", "derivative_norm"});
  nlohmann::json json_rows = nlohmann::json::array();
  for (std::size_t t = 0; t < norms.size(); ++t) {
    max_norm = std::max(max_norm, norms[t]);
    csv += bunching::csv_line({std::to_string(t), format_significant(norms[t])});
    json_rows.push_back({{"trial", t}, {"derivative_norm", norms[t]}});
  }
  const bool pass = max_norm <= 1e-7;

  nlohmann::json report;
  report["command"] = "stability";
  report["n"] = n;
  report["trials"] = trials;
  report["seed"] = seed;
  report["max_derivative_norm"] = max_norm;
  report["pass"] = pass;
  report["rows"] = json_rows;
  report["version"] = bunching::kArtifactVersion;

  std::map<std::string, std::string> parameters{{"n", std::to_string(n)},
                                                {"trials", std::to_string(trials)},
                                                {"seed", std::to_string(seed)}};
  const int status =
      emit(common, "stability", std::move(parameters), seed, csv, report, csv);
  if (status != kExitPass) return status;
  if (!pass) {
    std::cerr << "error: max derivative norm " << format_significant(max_norm)
              << " exceeds 1e-7\n";
    return kExitFail;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimode boson bunching for partially distinguishable photons"};
  app.set_version_flag("--version", bunching::kArtifactVersion);
  app.require_subcommand(1);

  // drury-check
  bool naive_oracle = false;
  CommonOutput drury_common;
  CLI::App* drury = app.add_subcommand(
      "drury-check", "Verify perm(A o A^T)/perm(A) = 1237/1152 for the counterexample matrix");
  drury->add_flag("--naive-oracle", naive_oracle, "Use the n! reference permanent");
  drury->add_flag("--json", drury_common.json_stdout, "Machine-readable report");
  drury->add_option("--manifest", drury_common.manifest_path, "Write a reproduction manifest");

  // ratio
  int n_min = 7, n_max = 7;
  double eta = 0.0;
  CommonOutput ratio_common;
  CLI::App* ratio = app.add_subcommand("ratio", "Bunching violation ratio R_n over a range of n");
  ratio->add_option("--n-min", n_min, "Smallest circuit size")->required();
  ratio->add_option("--n-max", n_max, "Largest circuit size")->required();
  ratio->add_option("--eta", eta, "Fixed beam-splitter transmittance (default 2/n)");
  add_output_options(ratio, ratio_common);

  // distribution
  int dist_n = 7;
  std::string dist_input = "star";
  CommonOutput dist_common;
  CLI::App* distribution = app.add_subcommand(
      "distribution", "Conditional photon-number distribution over the bunching modes");
  distribution->add_option("--n", dist_n, "Circuit size")->required();
  distribution->add_option("--input", dist_input, "Input state family: star|bos|dist")
      ->required();
  add_output_options(distribution, dist_common);

  // perturb
  std::string perturb_target = "states";
  std::string eps_grid = "0:0.2:0.02";
  std::uint64_t perturb_samples = 10000;
  std::uint64_t perturb_seed = 1;
  CommonOutput perturb_common;
  CLI::App* perturb =
      app.add_subcommand("perturb", "Monte-Carlo perturbation sweep of the n=7 circuit");
  perturb->add_option("--target", perturb_target, "states|unitary")->required();
  perturb->add_option("--eps-grid", eps_grid, "Noise levels as a:b:step");
  perturb->add_option("--samples", perturb_samples, "Samples per noise level");
  perturb->add_option("--seed", perturb_seed, "Stream seed");
  add_output_options(perturb, perturb_common);

  // search
  int search_n = 7, search_rank = 2, subset_size = 0;
  std::uint64_t search_samples = 100000;
  std::uint64_t search_seed = 1;
  bool plant_drury = false;
  CommonOutput search_common;
  CLI::App* search = app.add_subcommand(
      "search", "Random search for violations of perm(H o S^T) <= perm(H)");
  search->add_option("--n", search_n, "Dimension");
  search->add_option("--rank", search_rank, "Gram-matrix rank");
  search->add_option("--samples", search_samples, "Number of random samples");
  search->add_option("--seed", search_seed, "Stream seed");
  search->add_option("--subset-size", subset_size, "Output-subset size (default: rank)");
  search->add_flag("--plant-drury", plant_drury, "Also evaluate the known counterexample");
  add_output_options(search, search_common, /*with_format=*/false);

  // ternary
  double grid_step = 0.05;
  CommonOutput ternary_common;
  CLI::App* ternary = app.add_subcommand(
      "ternary", "Bunching ratio over the S(x,y) interpolation simplex");
  ternary->add_option("--grid-step", grid_step, "Simplex grid step in (0, 0.5]");
  add_output_options(ternary, ternary_common);

  // stability
  int stab_n = 7, stab_trials = 100;
  std::uint64_t stab_seed = 1;
  CommonOutput stab_common;
  CLI::App* stability = app.add_subcommand(
      "stability", "First-order flatness of the bunching probability around S = E");
  stability->add_option("--n", stab_n, "Circuit size");
  stability->add_option("--trials", stab_trials, "Number of random directions");
  stability->add_option("--seed", stab_seed, "Stream seed");
  add_output_options(stability, stab_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (drury->parsed()) return run_drury_check(naive_oracle, drury_common);
    if (ratio->parsed()) return run_ratio(n_min, n_max, eta, ratio_common);
    if (distribution->parsed()) return run_distribution(dist_n, dist_input, dist_common);
    if (perturb->parsed()) {
      return run_perturb(perturb_target, eps_grid, perturb_samples, perturb_seed, perturb_common);
    }
    if (search->parsed()) {
      return run_search(search_n, search_rank, search_samples, search_seed, plant_drury,
                        subset_size, search_common);
    }
    if (ternary->parsed()) return run_ternary(grid_step, ternary_common);
    if (stability->parsed()) return run_stability(stab_n, stab_trials, stab_seed, stab_common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
