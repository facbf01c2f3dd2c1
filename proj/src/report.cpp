#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stackbelief/harness.hpp"
#include "stackbelief/serialization.hpp"

namespace stackbelief {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings everywhere
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

std::string fixed1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<double> row_major(const Eigen::MatrixXd& M) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(M.size()));
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) out.push_back(M(r, c));
  }
  return out;
}

Eigen::MatrixXd square_from_row_major(const std::vector<double>& data,
                                      const std::string& what) {
  const auto dim = static_cast<Eigen::Index>(std::llround(
      std::sqrt(static_cast<double>(data.size()))));
  if (dim * dim != static_cast<Eigen::Index>(data.size())) {
    throw std::runtime_error(what + ": array length is not a perfect square");
  }
  Eigen::MatrixXd M(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      M(r, c) = data[static_cast<std::size_t>(r * dim + c)];
    }
  }
  return M;
}

Eigen::Matrix2d block2_from_json(const json& j, const std::string& key) {
  const auto arr = j.at(key).get<std::vector<double>>();
  if (arr.size() != 4) {
    throw std::runtime_error("scenario config: " + key +
                             " must have 4 row-major entries");
  }
  Eigen::Matrix2d M;
  M << arr[0], arr[1], arr[2], arr[3];
  return M;
}

ordered_json block2_to_json(const Eigen::Matrix2d& M) {
  return ordered_json::array({M(0, 0), M(0, 1), M(1, 0), M(1, 1)});
}

ordered_json table_to_json(const StatsTable& table) {
  ordered_json j;
  j["rows"] = table.row_labels;
  j["cols"] = table.col_labels;
  ordered_json values = ordered_json::array();
  ordered_json counts = ordered_json::array();
  for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
    ordered_json vrow = ordered_json::array();
    ordered_json crow = ordered_json::array();
    for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
      vrow.push_back(table.values(r, c));
      crow.push_back(table.counts(r, c));
    }
    values.push_back(vrow);
    counts.push_back(crow);
  }
  j["values"] = values;
  j["counts"] = counts;
  j["excluded_groups"] = table.excluded_groups;
  return j;
}

}  // namespace

nlohmann::ordered_json cost_model_to_json(const QuadCostModel& cost) {
  ordered_json j;
  j["label"] = cost.label;
  j["Q"] = row_major(cost.Q);
  j["R"] = row_major(cost.R);
  return j;
}

QuadCostModel cost_model_from_json(const json& j) {
  return QuadCostModel::make(
      square_from_row_major(j.at("Q").get<std::vector<double>>(), "Q"),
      square_from_row_major(j.at("R").get<std::vector<double>>(), "R"),
      j.at("label").get<std::string>());
}

nlohmann::ordered_json scenario_params_to_json(const ScenarioParams& p) {
  ordered_json j;
  j["q_l1"] = block2_to_json(p.q_l1);
  j["q_l2"] = block2_to_json(p.q_l2);
  j["q_l3"] = block2_to_json(p.q_l3);
  j["q_l4"] = block2_to_json(p.q_l4);
  j["epsilon"] = p.epsilon;
  j["r_l"] = p.r_l;
  j["q_f1_t"] = block2_to_json(p.q_f1_t);
  j["q_f2_t"] = block2_to_json(p.q_f2_t);
  j["q_f3_t"] = block2_to_json(p.q_f3_t);
  j["q_f2_i"] = block2_to_json(p.q_f2_i);
  j["q_f4_i"] = block2_to_json(p.q_f4_i);
  j["q_f5_i"] = block2_to_json(p.q_f5_i);
  j["alpha"] = p.alpha;
  j["q_f3_a"] = block2_to_json(p.q_f3_a);
  j["q_f2_a"] = block2_to_json(p.q_f2_a);
  j["q_f4_a"] = block2_to_json(p.q_f4_a);
  j["q_f5_a"] = block2_to_json(p.q_f5_a);
  j["r_f"] = p.r_f;
  j["x0_bound"] = p.x0_bound;
  j["T"] = p.T;
  j["n_runs"] = p.n_runs;
  j["tau_values"] = p.tau_values;
  return j;
}

ScenarioParams scenario_params_from_json(const json& j) {
  ScenarioParams p = ScenarioParams::defaults();
  static const std::vector<std::string> known{
      "q_l1", "q_l2", "q_l3", "q_l4", "epsilon", "r_l",
      "q_f1_t", "q_f2_t", "q_f3_t", "q_f2_i", "q_f4_i", "q_f5_i",
      "alpha", "q_f3_a", "q_f2_a", "q_f4_a", "q_f5_a", "r_f",
      "x0_bound", "T", "n_runs", "tau_values"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::runtime_error("scenario config: unknown key '" + key + "'");
    }
  }
  if (j.contains("q_l1")) p.q_l1 = block2_from_json(j, "q_l1");
  if (j.contains("q_l2")) p.q_l2 = block2_from_json(j, "q_l2");
  if (j.contains("q_l3")) p.q_l3 = block2_from_json(j, "q_l3");
  if (j.contains("q_l4")) p.q_l4 = block2_from_json(j, "q_l4");
  if (j.contains("epsilon")) p.epsilon = j.at("epsilon").get<double>();
  if (j.contains("r_l")) p.r_l = j.at("r_l").get<double>();
  if (j.contains("q_f1_t")) p.q_f1_t = block2_from_json(j, "q_f1_t");
  if (j.contains("q_f2_t")) p.q_f2_t = block2_from_json(j, "q_f2_t");
  if (j.contains("q_f3_t")) p.q_f3_t = block2_from_json(j, "q_f3_t");
  if (j.contains("q_f2_i")) p.q_f2_i = block2_from_json(j, "q_f2_i");
  if (j.contains("q_f4_i")) p.q_f4_i = block2_from_json(j, "q_f4_i");
  if (j.contains("q_f5_i")) p.q_f5_i = block2_from_json(j, "q_f5_i");
  if (j.contains("alpha")) p.alpha = j.at("alpha").get<double>();
  if (j.contains("q_f3_a")) p.q_f3_a = block2_from_json(j, "q_f3_a");
  if (j.contains("q_f2_a")) p.q_f2_a = block2_from_json(j, "q_f2_a");
  if (j.contains("q_f4_a")) p.q_f4_a = block2_from_json(j, "q_f4_a");
  if (j.contains("q_f5_a")) p.q_f5_a = block2_from_json(j, "q_f5_a");
  if (j.contains("r_f")) p.r_f = j.at("r_f").get<double>();
  if (j.contains("x0_bound")) p.x0_bound = j.at("x0_bound").get<double>();
  if (j.contains("T")) p.T = j.at("T").get<int>();
  if (j.contains("n_runs")) p.n_runs = j.at("n_runs").get<int>();
  if (j.contains("tau_values")) {
    p.tau_values = j.at("tau_values").get<std::vector<int>>();
  }
  return p;
}

ScenarioParams load_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in, nullptr, /*allow_exceptions=*/true,
                    /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path + ": " +
                             e.what());
  }
  ScenarioParams params = scenario_params_from_json(j);
  params.validate();
  return params;
}

nlohmann::ordered_json run_summary_to_json(const RunSummary& r) {
  ordered_json j;
  j["run_index"] = r.run_index;
  j["true_intention"] = r.true_label;
  j["scheme"] = r.scheme;
  j["tau"] = r.tau;
  j["info_structure"] = to_string(r.info);
  j["seed"] = r.seed;
  j["sigma_L"] = r.sigma_L;
  j["sigma_F"] = r.sigma_F;
  j["x0"] = std::vector<double>(r.x0.data(), r.x0.data() + r.x0.size());
  j["total_cost"] = r.total_cost;
  j["pre_update"] = r.pre_update;
  j["post_update"] = r.post_update;
  j["segment_starts"] = r.segment_starts;
  j["segment_labels"] = r.segment_labels;
  j["excluded"] = r.excluded;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

void write_win_matrix_csv(const std::string& path, const StatsTable& table) {
  auto out = open_out(path);
  out << "true_intention,scheme,percent,n\n";
  for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
    for (std::size_t c = 0; c < table.col_labels.size(); ++c) {
      out << table.row_labels[r] << ',' << table.col_labels[c] << ','
          << fixed1(table.values(static_cast<Eigen::Index>(r),
                                 static_cast<Eigen::Index>(c)))
          << ','
          << table.counts(static_cast<Eigen::Index>(r),
                          static_cast<Eigen::Index>(c))
          << '\n';
    }
  }
}

void write_pct_higher_csv(const std::string& path, const StatsTable& table) {
  auto out = open_out(path);
  out << "true_intention,scheme,pct_higher,n\n";
  for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
    for (std::size_t c = 0; c < table.col_labels.size(); ++c) {
      out << table.row_labels[r] << ',' << table.col_labels[c] << ','
          << fixed1(table.values(static_cast<Eigen::Index>(r),
                                 static_cast<Eigen::Index>(c)))
          << ','
          << table.counts(static_cast<Eigen::Index>(r),
                          static_cast<Eigen::Index>(c))
          << '\n';
    }
  }
}

void write_tau_sweep_csv(const std::string& path,
                         const std::vector<std::pair<int, StatsTable>>& sweep) {
  auto out = open_out(path);
  out << "tau,true_intention,scheme,percent,n\n";
  for (const auto& [tau, table] : sweep) {
    for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
      for (std::size_t c = 0; c < table.col_labels.size(); ++c) {
        out << tau << ',' << table.row_labels[r] << ',' << table.col_labels[c]
            << ','
            << fixed1(table.values(static_cast<Eigen::Index>(r),
                                   static_cast<Eigen::Index>(c)))
            << ','
            << table.counts(static_cast<Eigen::Index>(r),
                            static_cast<Eigen::Index>(c))
            << '\n';
      }
    }
  }
}

void write_run_log_jsonl(const std::string& path,
                         const std::vector<RunSummary>& records) {
  auto out = open_out(path);
  for (const auto& r : records) out << run_summary_to_json(r).dump() << '\n';
}

void write_posterior_trace_csv(const std::string& path,
                               const std::vector<RunSummary>& records) {
  auto out = open_out(path);
  out << "run_index,true_intention,tau,t,p_T,p_I,p_A\n";
  for (const auto& r : records) {
    if (r.excluded || r.posterior_trace.empty()) continue;
    for (std::size_t t = 0; t < r.posterior_trace.size(); ++t) {
      const Eigen::VectorXd& p = r.posterior_trace[t];
      out << r.run_index << ',' << r.true_label << ',' << r.tau << ',' << t;
      for (Eigen::Index i = 0; i < p.size(); ++i) out << ',' << fixed6(p(i));
      out << '\n';
    }
  }
}

void write_stats_json(const std::string& path, const StatsTable& win,
                      const StatsTable& pct,
                      const std::vector<std::pair<int, StatsTable>>& sweep) {
  ordered_json j;
  j["win_matrix"] = table_to_json(win);
  j["pct_higher"] = table_to_json(pct);
  ordered_json sweep_json = ordered_json::array();
  for (const auto& [tau, table] : sweep) {
    ordered_json entry;
    entry["tau"] = tau;
    entry["win_matrix"] = table_to_json(table);
    sweep_json.push_back(entry);
  }
  j["tau_sweep"] = sweep_json;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

// --- minimal static SVG charts ---

namespace {

const char* kBarColors[] = {"#4878d0", "#ee854a", "#6acc64", "#d65f5f"};

void svg_header(std::ostream& out, int width, int height,
                const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n"
      << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
}

}  // namespace

void emit_win_matrix_svg(const std::string& path, const StatsTable& table,
                         const std::string& title) {
  const int rows = static_cast<int>(table.row_labels.size());
  const int cols = static_cast<int>(table.col_labels.size());
  const int group_w = 40 * cols + 30;
  const int width = std::max(360, 60 + rows * group_w);
  const int height = 300;
  const int base_y = 250;
  const double scale = 200.0 / std::max(1.0, table.values.maxCoeff());

  auto out = open_out(path);
  svg_header(out, width, height, title);
  for (int r = 0; r < rows; ++r) {
    const int gx = 50 + r * group_w;
    for (int c = 0; c < cols; ++c) {
      const double v = table.values(r, c);
      const int h = static_cast<int>(v * scale);
      out << "<rect x=\"" << gx + c * 40 << "\" y=\"" << base_y - h
          << "\" width=\"32\" height=\"" << h << "\" fill=\""
          << kBarColors[c % 4] << "\"/>\n";
      out << "<text x=\"" << gx + c * 40 + 16 << "\" y=\"" << base_y - h - 4
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"10\">"
          << fixed1(v) << "</text>\n";
    }
    out << "<text x=\"" << gx + cols * 20 << "\" y=\"" << base_y + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">true "
        << table.row_labels[r] << "</text>\n";
  }
  for (int c = 0; c < cols; ++c) {
    out << "<rect x=\"" << 50 + c * 110 << "\" y=\"" << height - 22
        << "\" width=\"10\" height=\"10\" fill=\"" << kBarColors[c % 4]
        << "\"/>\n<text x=\"" << 64 + c * 110 << "\" y=\"" << height - 13
        << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << table.col_labels[c] << "</text>\n";
  }
  out << "</svg>\n";
}

void emit_tau_sweep_svg(const std::string& path,
                        const std::vector<std::pair<int, StatsTable>>& sweep,
                        const std::string& title) {
  if (sweep.empty()) throw std::invalid_argument("emit_tau_sweep_svg: empty");
  const int width = 520, height = 320, base_y = 260, x0 = 60;
  const int plot_w = width - 100;
  const auto& first = sweep.front().second;
  const int cols = static_cast<int>(first.col_labels.size());
  const int n_tau = static_cast<int>(sweep.size());

  auto out = open_out(path);
  svg_header(out, width, height, title);
  // One polyline per scheme over the (single-row) sweep tables.
  for (int c = 0; c < cols; ++c) {
    out << "<polyline fill=\"none\" stroke=\"" << kBarColors[c % 4]
        << "\" stroke-width=\"2\" points=\"";
    for (int k = 0; k < n_tau; ++k) {
      const double v = sweep[static_cast<std::size_t>(k)].second.values(0, c);
      const int px = x0 + (n_tau == 1 ? 0 : k * plot_w / (n_tau - 1));
      const int py = base_y - static_cast<int>(v * 2.0);
      out << px << ',' << py << ' ';
    }
    out << "\"/>\n";
    out << "<rect x=\"" << 60 + c * 110 << "\" y=\"" << height - 22
        << "\" width=\"10\" height=\"10\" fill=\"" << kBarColors[c % 4]
        << "\"/>\n<text x=\"" << 74 + c * 110 << "\" y=\"" << height - 13
        << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << first.col_labels[c] << "</text>\n";
  }
  for (int k = 0; k < n_tau; ++k) {
    const int px = x0 + (n_tau == 1 ? 0 : k * plot_w / (n_tau - 1));
    out << "<text x=\"" << px << "\" y=\"" << base_y + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">tau=" << sweep[static_cast<std::size_t>(k)].first
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace stackbelief
