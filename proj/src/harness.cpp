#include "stackbelief/harness.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace stackbelief {

namespace {

const std::vector<std::string> kIntentionOrder{"T", "I", "A"};

void parallel_for(int total, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 0) {
    jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 0) jobs = 1;
  }
  jobs = std::min(jobs, std::max(total, 1));
  if (jobs == 1) {
    for (int i = 0; i < total; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w]() {
      for (int i = w; i < total; i += jobs) fn(i);
    });
  }
  for (auto& worker : workers) worker.join();
}

std::vector<std::string> intentions_of(const ExperimentConfig& config) {
  if (config.true_intention == "sweep") return kIntentionOrder;
  return {config.true_intention};
}

RunSummary summarize(const RunRecord& rec, int run_index,
                     const std::string& true_label, const std::string& scheme,
                     int tau, const InitialDraw& draw, std::uint64_t seed) {
  RunSummary s;
  s.run_index = run_index;
  s.true_label = true_label;
  s.scheme = scheme;
  s.tau = tau;
  s.info = rec.info;
  s.seed = seed;
  s.sigma_L = draw.sigma_L;
  s.sigma_F = draw.sigma_F;
  s.x0 = draw.x0;
  s.total_cost = rec.total_leader_cost();
  s.pre_update = rec.breakdown.pre_update;
  s.post_update = rec.breakdown.post_update;
  for (const auto& seg : rec.schedule.segments) {
    s.segment_starts.push_back(seg.start_time);
    s.segment_labels.push_back(seg.belief.label);
  }
  s.posterior_trace = rec.posterior_trace;
  return s;
}

// One (run index, true intention) group: every scheme on the same draw.
std::vector<RunSummary> run_group(const ExperimentConfig& config, int tau,
                                  int run_index, const std::string& true_label,
                                  const InitialDraw& draw,
                                  const QuadCostModel& leader_cost,
                                  const IntentionSet& intentions) {
  const std::uint64_t seed = derive_seed(config.master_seed,
                                         static_cast<std::uint64_t>(run_index));
  const LtiGameDynamics dyn = build_joint_dynamics(draw.sigma_L, draw.sigma_F);
  const StackelbergGame game = StackelbergGame::make(
      dyn, leader_cost, intentions.by_label(true_label), config.scenario.T);

  std::vector<RunSummary> out;
  out.reserve(config.schemes.size());
  for (SchemeKind kind : config.schemes) {
    RunRecord rec;
    switch (kind) {
      case SchemeKind::kFixedT:
        rec = run_fixed_periodic(game, intentions.by_label("T"), tau,
                                 config.info, draw.x0, seed);
        break;
      case SchemeKind::kFixedI:
        rec = run_fixed_periodic(game, intentions.by_label("I"), tau,
                                 config.info, draw.x0, seed);
        break;
      case SchemeKind::kFixedA:
        rec = run_fixed_periodic(game, intentions.by_label("A"), tau,
                                 config.info, draw.x0, seed);
        break;
      case SchemeKind::kAdaptive:
        rec = run_adaptive(game, intentions.as_vector(), tau, config.info,
                           draw.x0, seed);
        break;
    }
    out.push_back(summarize(rec, run_index, true_label, scheme_label(kind),
                            tau, draw, seed));
  }
  return out;
}

ExperimentResult run_experiment_at_tau(const ExperimentConfig& config,
                                       int tau) {
  config.validate();
  const std::vector<std::string> intentions = intentions_of(config);
  const QuadCostModel leader_cost = build_leader_cost(config.scenario);
  const IntentionSet intention_set = build_intentions(config.scenario);

  // One slot per (run index, intention) group, filled in parallel, flattened
  // in index order so output bytes never depend on scheduling.
  const int groups_per_run = static_cast<int>(intentions.size());
  const int total = config.n_runs * groups_per_run;
  std::vector<std::vector<RunSummary>> slots(
      static_cast<std::size_t>(total));

  parallel_for(total, config.jobs, [&](int slot) {
    const int run_index = slot / groups_per_run;
    const std::string& true_label =
        intentions[static_cast<std::size_t>(slot % groups_per_run)];
    Rng rng(derive_seed(config.master_seed,
                        static_cast<std::uint64_t>(run_index)));
    const InitialDraw draw = sample_initial(rng, config.scenario);
    try {
      slots[static_cast<std::size_t>(slot)] =
          run_group(config, tau, run_index, true_label, draw, leader_cost,
                    intention_set);
    } catch (const std::exception& e) {
      // Mark the whole group excluded so schemes stay comparable.
      for (SchemeKind kind : config.schemes) {
        RunSummary s;
        s.run_index = run_index;
        s.true_label = true_label;
        s.scheme = scheme_label(kind);
        s.tau = tau;
        s.info = config.info;
        s.excluded = true;
        s.error = e.what();
        slots[static_cast<std::size_t>(slot)].push_back(std::move(s));
      }
    }
  });

  ExperimentResult result;
  result.total_groups = total;
  for (auto& group : slots) {
    if (!group.empty() && group.front().excluded) ++result.excluded_groups;
    for (auto& s : group) result.records.push_back(std::move(s));
  }
  return result;
}

struct GroupKey {
  std::string true_label;
  int run_index;
  int tau;
  int info;
  bool operator<(const GroupKey& other) const {
    return std::tie(true_label, run_index, tau, info) <
           std::tie(other.true_label, other.run_index, other.tau, other.info);
  }
};

// Canonical labels first, anything else appended in sorted order, so tables
// keep a stable layout for ad-hoc belief sets too.
std::vector<std::string> ordered_labels(
    const std::vector<RunSummary>& records,
    const std::vector<std::string>& canonical,
    const std::function<const std::string&(const RunSummary&)>& key) {
  std::vector<std::string> seen;
  for (const auto& r : records) {
    if (r.excluded) continue;
    if (std::find(seen.begin(), seen.end(), key(r)) == seen.end()) {
      seen.push_back(key(r));
    }
  }
  std::vector<std::string> out;
  for (const auto& label : canonical) {
    if (std::find(seen.begin(), seen.end(), label) != seen.end()) {
      out.push_back(label);
    }
  }
  std::vector<std::string> extra;
  for (const auto& label : seen) {
    if (std::find(out.begin(), out.end(), label) == out.end()) {
      extra.push_back(label);
    }
  }
  std::sort(extra.begin(), extra.end());
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

std::vector<std::string> present_rows(const std::vector<RunSummary>& records) {
  return ordered_labels(
      records, kIntentionOrder,
      [](const RunSummary& r) -> const std::string& { return r.true_label; });
}

std::vector<std::string> present_cols(const std::vector<RunSummary>& records) {
  return ordered_labels(
      records, {"fixed-T", "fixed-I", "fixed-A", "adaptive"},
      [](const RunSummary& r) -> const std::string& { return r.scheme; });
}

std::map<GroupKey, std::vector<const RunSummary*>> group_records(
    const std::vector<RunSummary>& records) {
  std::map<GroupKey, std::vector<const RunSummary*>> groups;
  for (const auto& r : records) {
    if (r.excluded) continue;
    groups[GroupKey{r.true_label, r.run_index, r.tau,
                    static_cast<int>(r.info)}]
        .push_back(&r);
  }
  return groups;
}

std::size_t index_of(const std::vector<std::string>& labels,
                     const std::string& label) {
  return static_cast<std::size_t>(
      std::find(labels.begin(), labels.end(), label) - labels.begin());
}

// Strict argmin with ties credited to the true-belief scheme, then the
// lexicographically smallest scheme label.
const RunSummary* pick_winner(const std::vector<const RunSummary*>& group) {
  double min_cost = group.front()->total_cost;
  for (const auto* r : group) min_cost = std::min(min_cost, r->total_cost);
  const std::string true_scheme = "fixed-" + group.front()->true_label;
  const RunSummary* winner = nullptr;
  for (const auto* r : group) {
    if (r->total_cost > min_cost) continue;
    if (r->scheme == true_scheme) return r;
    if (winner == nullptr || r->scheme < winner->scheme) winner = r;
  }
  return winner;
}

}  // namespace

std::string scheme_label(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kFixedT: return "fixed-T";
    case SchemeKind::kFixedI: return "fixed-I";
    case SchemeKind::kFixedA: return "fixed-A";
    case SchemeKind::kAdaptive: return "adaptive";
  }
  throw std::invalid_argument("scheme_label: bad kind");
}

SchemeKind scheme_from_string(const std::string& s) {
  if (s == "fixed-T" || s == "T") return SchemeKind::kFixedT;
  if (s == "fixed-I" || s == "I") return SchemeKind::kFixedI;
  if (s == "fixed-A" || s == "A") return SchemeKind::kFixedA;
  if (s == "adaptive" || s == "Ad") return SchemeKind::kAdaptive;
  throw std::invalid_argument("unknown scheme '" + s + "'");
}

void ExperimentConfig::validate() const {
  scenario.validate();
  if (schemes.empty()) {
    throw std::invalid_argument("ExperimentConfig: schemes must be nonempty");
  }
  if (true_intention != "sweep" &&
      std::find(kIntentionOrder.begin(), kIntentionOrder.end(),
                true_intention) == kIntentionOrder.end()) {
    throw std::invalid_argument("ExperimentConfig: bad true_intention '" +
                                true_intention + "'");
  }
  if (tau_values.empty()) {
    throw std::invalid_argument("ExperimentConfig: tau_values must be nonempty");
  }
  for (int tau : tau_values) {
    if (tau <= 0 || tau > scenario.T) {
      throw std::invalid_argument("ExperimentConfig: tau outside (0, T]");
    }
  }
  if (n_runs < 1) {
    throw std::invalid_argument("ExperimentConfig: n_runs must be >= 1");
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return run_experiment_at_tau(config, config.tau_values.front());
}

StatsTable win_matrix(const std::vector<RunSummary>& records) {
  const auto groups = group_records(records);
  if (groups.empty()) {
    throw std::invalid_argument("win_matrix: no included records");
  }
  StatsTable table;
  table.row_labels = present_rows(records);
  table.col_labels = present_cols(records);
  const auto rows = static_cast<Eigen::Index>(table.row_labels.size());
  const auto cols = static_cast<Eigen::Index>(table.col_labels.size());
  Eigen::MatrixXi wins = Eigen::MatrixXi::Zero(rows, cols);
  Eigen::MatrixXi totals = Eigen::MatrixXi::Zero(rows, cols);

  for (const auto& [key, group] : groups) {
    const auto row = static_cast<Eigen::Index>(
        index_of(table.row_labels, key.true_label));
    for (const auto* r : group) {
      totals(row, static_cast<Eigen::Index>(
                      index_of(table.col_labels, r->scheme)))++;
    }
    const RunSummary* winner = pick_winner(group);
    wins(row, static_cast<Eigen::Index>(
                  index_of(table.col_labels, winner->scheme)))++;
  }
  table.values.resize(rows, cols);
  table.counts = totals;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      table.values(r, c) =
          totals(r, c) == 0 ? 0.0 : 100.0 * wins(r, c) / totals(r, c);
    }
  }
  return table;
}

StatsTable pct_higher_cost(const std::vector<RunSummary>& records) {
  const auto groups = group_records(records);
  if (groups.empty()) {
    throw std::invalid_argument("pct_higher_cost: no included records");
  }
  StatsTable table;
  table.row_labels = present_rows(records);
  table.col_labels = present_cols(records);
  const auto rows = static_cast<Eigen::Index>(table.row_labels.size());
  const auto cols = static_cast<Eigen::Index>(table.col_labels.size());
  table.values = Eigen::MatrixXd::Zero(rows, cols);
  table.counts = Eigen::MatrixXi::Zero(rows, cols);

  for (const auto& [key, group] : groups) {
    double min_cost = group.front()->total_cost;
    for (const auto* r : group) min_cost = std::min(min_cost, r->total_cost);
    if (!(min_cost > 0.0)) {
      ++table.excluded_groups;
      continue;
    }
    const auto row = static_cast<Eigen::Index>(
        index_of(table.row_labels, key.true_label));
    for (const auto* r : group) {
      const auto col = static_cast<Eigen::Index>(
          index_of(table.col_labels, r->scheme));
      table.values(row, col) += (r->total_cost - min_cost) / min_cost * 100.0;
      table.counts(row, col)++;
    }
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (table.counts(r, c) > 0) table.values(r, c) /= table.counts(r, c);
    }
  }
  return table;
}

std::vector<std::pair<int, ExperimentResult>> tau_sweep_records(
    const ExperimentConfig& config) {
  std::vector<std::pair<int, ExperimentResult>> out;
  for (int tau : config.tau_values) {
    out.emplace_back(tau, run_experiment_at_tau(config, tau));
  }
  return out;
}

std::vector<std::pair<int, StatsTable>> tau_sweep(
    const ExperimentConfig& config) {
  std::vector<std::pair<int, StatsTable>> out;
  for (auto& [tau, result] : tau_sweep_records(config)) {
    out.emplace_back(tau, win_matrix(result.records));
  }
  return out;
}

}  // namespace stackbelief
