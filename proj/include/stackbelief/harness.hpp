#ifndef STACKBELIEF_HARNESS_HPP
#define STACKBELIEF_HARNESS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stackbelief/belief_protocol.hpp"
#include "stackbelief/scenario.hpp"

namespace stackbelief {

enum class SchemeKind { kFixedT, kFixedI, kFixedA, kAdaptive };

std::string scheme_label(SchemeKind kind);
SchemeKind scheme_from_string(const std::string& s);

struct ExperimentConfig {
  ScenarioParams scenario = ScenarioParams::defaults();
  InfoStructure info = InfoStructure::kOpenLoop;
  std::vector<SchemeKind> schemes{SchemeKind::kFixedT, SchemeKind::kFixedI,
                                  SchemeKind::kFixedA, SchemeKind::kAdaptive};
  std::string true_intention = "sweep";  // "T", "I", "A" or "sweep"
  std::vector<int> tau_values{1};        // front() drives run_experiment
  int n_runs = 1000;
  std::uint64_t master_seed = 12345;
  int jobs = 0;  // 0 = hardware concurrency

  void validate() const;
};

// Flat per-(run, scheme) outcome; the sampled draw is shared by every scheme,
// tau and info structure of the same run index (common random numbers).
struct RunSummary {
  int run_index = 0;
  std::string true_label;
  std::string scheme;
  int tau = 0;
  InfoStructure info = InfoStructure::kOpenLoop;
  std::uint64_t seed = 0;
  double sigma_L = 1.0;
  double sigma_F = 1.0;
  Eigen::VectorXd x0;
  double total_cost = 0.0;
  double pre_update = 0.0;
  double post_update = 0.0;
  std::vector<int> segment_starts;
  std::vector<std::string> segment_labels;
  std::vector<Eigen::VectorXd> posterior_trace;
  bool excluded = false;
  std::string error;
};

struct ExperimentResult {
  std::vector<RunSummary> records;
  int total_groups = 0;     // (run index, true intention) groups attempted
  int excluded_groups = 0;  // groups dropped because some scheme failed
};

struct StatsTable {
  std::vector<std::string> row_labels;  // true intention
  std::vector<std::string> col_labels;  // scheme
  Eigen::MatrixXd values;
  Eigen::MatrixXi counts;  // included runs per cell
  int excluded_groups = 0;
};

// n_runs x |schemes| (x |intentions| when sweeping) runs at
// tau_values.front(), every scheme replayed on the same sampled draw.
// Deterministic in (master_seed, config); failed groups are excluded and
// counted, never silently dropped.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Percent of runs in which each scheme attains the strict minimum total
// leader cost (ties credited to the true-belief scheme, then the
// lexicographically smallest label); rows sum to 100.
StatsTable win_matrix(const std::vector<RunSummary>& records);

// Mean percent by which each scheme's total exceeds the per-run minimum;
// the winning scheme contributes 0. Runs whose minimum is 0 are excluded
// and counted.
StatsTable pct_higher_cost(const std::vector<RunSummary>& records);

// Re-runs the experiment for each tau with identical per-run samples and
// returns the per-tau win matrices.
std::vector<std::pair<int, StatsTable>> tau_sweep(
    const ExperimentConfig& config);
std::vector<std::pair<int, ExperimentResult>> tau_sweep_records(
    const ExperimentConfig& config);

// --- report writers (report.cpp) ---

void write_win_matrix_csv(const std::string& path, const StatsTable& table);
void write_pct_higher_csv(const std::string& path, const StatsTable& table);
void write_tau_sweep_csv(const std::string& path,
                         const std::vector<std::pair<int, StatsTable>>& sweep);
void write_run_log_jsonl(const std::string& path,
                         const std::vector<RunSummary>& records);
void write_posterior_trace_csv(const std::string& path,
                               const std::vector<RunSummary>& records);
// Full-precision JSON mirror of the CSV tables.
void write_stats_json(const std::string& path, const StatsTable& win,
                      const StatsTable& pct,
                      const std::vector<std::pair<int, StatsTable>>& sweep);

void emit_win_matrix_svg(const std::string& path, const StatsTable& table,
                         const std::string& title);
void emit_tau_sweep_svg(const std::string& path,
                        const std::vector<std::pair<int, StatsTable>>& sweep,
                        const std::string& title);

}  // namespace stackbelief

#endif  // STACKBELIEF_HARNESS_HPP
