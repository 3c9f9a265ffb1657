// Copyright 2026 The lqgrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lqgrl/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lqgrl/errors.hpp"
#include "lqgrl/lqg.hpp"
#include "lqgrl/presets.hpp"
#include "lqgrl/reward.hpp"

namespace lqgrl {
namespace {

using nlohmann::json;

constexpr int kFixedColumns = 10;

void reject_unknown_keys(const json& j, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(path + key + ": unknown field");
    }
  }
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) {
    throw ConfigError(path + ": expected an object");
  }
  return j;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) {
    throw ConfigError(path + ": expected a number");
  }
  return j.get<double>();
}

long integer_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) {
    throw ConfigError(path + ": expected an integer");
  }
  return j.get<long>();
}

Eigen::Index dimension_at(const json& plant, const char* key) {
  const std::string path = std::string("plant.") + key;
  if (!plant.contains(key)) {
    throw ConfigError(path + ": missing dimension");
  }
  const long n = integer_at(plant.at(key), path);
  if (n < 1) {
    throw ConfigError(path + ": dimension must be positive");
  }
  return static_cast<Eigen::Index>(n);
}

std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array()) {
    throw ConfigError(path + ": expected an array of numbers");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Vector vector_at(const json& j, const std::string& path) {
  const std::vector<double> values = number_list(j, path);
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

Matrix matrix_at(const json& plant, const char* key, Eigen::Index rows,
                 Eigen::Index cols) {
  const std::string path = std::string("plant.") + key;
  if (!plant.contains(key)) {
    throw ConfigError(path + ": missing matrix");
  }
  const std::vector<double> values = number_list(plant.at(key), path);
  if (static_cast<Eigen::Index>(values.size()) != rows * cols) {
    throw ConfigError(path + ": expected " + std::to_string(rows * cols) +
                      " numbers (" + std::to_string(rows) + "x" +
                      std::to_string(cols) + " row-major), got " +
                      std::to_string(values.size()));
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = values[static_cast<std::size_t>(r * cols + c)];
    }
  }
  return m;
}

PlantModel parse_plant(const json& j) {
  require_object(j, "plant");
  reject_unknown_keys(j, "plant.", {"nx", "nu", "nw", "ny", "A", "B", "Bw", "C",
                                    "Q", "R", "W", "V"});
  const Eigen::Index nx = dimension_at(j, "nx");
  const Eigen::Index nu = dimension_at(j, "nu");
  const Eigen::Index nw = dimension_at(j, "nw");
  const Eigen::Index ny = dimension_at(j, "ny");
  PlantModel p;
  p.A = matrix_at(j, "A", nx, nx);
  p.B = matrix_at(j, "B", nx, nu);
  p.Bw = matrix_at(j, "Bw", nx, nw);
  p.C = matrix_at(j, "C", ny, nx);
  p.Q = matrix_at(j, "Q", nx, nx);
  p.R = matrix_at(j, "R", nu, nu);
  p.W = matrix_at(j, "W", nw, nw);
  p.V = matrix_at(j, "V", ny, ny);
  return p;
}

PolicyForm parse_form(const json& j) {
  require_object(j, "policy");
  reject_unknown_keys(j, "policy.", {"form", "order"});
  if (!j.contains("form") || !j.at("form").is_string()) {
    throw ConfigError("policy.form: expected \"companion2\" or \"ctrb_canonical\"");
  }
  const std::string form = j.at("form").get<std::string>();
  if (form == "companion2") {
    if (j.contains("order") && integer_at(j.at("order"), "policy.order") != 2) {
      throw ConfigError("policy.order: companion2 is second order");
    }
    return PolicyForm::companion2();
  }
  if (form == "ctrb_canonical") {
    if (!j.contains("order")) {
      throw ConfigError("policy.order: required for ctrb_canonical");
    }
    const long order = integer_at(j.at("order"), "policy.order");
    if (order < 1 || order > 64) {
      throw ConfigError("policy.order: must be in [1, 64]");
    }
    return PolicyForm::ctrb_canonical(static_cast<int>(order));
  }
  throw ConfigError("policy.form: unknown form \"" + form + "\"");
}

void parse_train(const json& j, TrainConfig& train) {
  require_object(j, "train");
  reject_unknown_keys(j, "train.",
                      {"lower", "upper", "n_init", "n_steps", "eta",
                       "max_halvings", "barzilai_borwein", "b",
                       "quadrature_order", "mc_fallback_samples", "seed",
                       "threads"});
  if (j.contains("lower")) train.hypercube.lower = vector_at(j["lower"], "train.lower");
  if (j.contains("upper")) train.hypercube.upper = vector_at(j["upper"], "train.upper");
  if (j.contains("n_init")) train.n_init = static_cast<int>(integer_at(j["n_init"], "train.n_init"));
  if (j.contains("n_steps")) train.n_steps = static_cast<int>(integer_at(j["n_steps"], "train.n_steps"));
  if (j.contains("eta")) train.step.eta = number_at(j["eta"], "train.eta");
  if (j.contains("max_halvings")) {
    train.step.max_halvings = static_cast<int>(integer_at(j["max_halvings"], "train.max_halvings"));
  }
  if (j.contains("barzilai_borwein")) {
    if (!j["barzilai_borwein"].is_boolean()) {
      throw ConfigError("train.barzilai_borwein: expected a boolean");
    }
    train.step.barzilai_borwein = j["barzilai_borwein"].get<bool>();
  }
  if (j.contains("b")) train.perturbation.b = number_at(j["b"], "train.b");
  if (j.contains("quadrature_order")) {
    train.perturbation.quadrature_order =
        static_cast<int>(integer_at(j["quadrature_order"], "train.quadrature_order"));
  }
  if (j.contains("mc_fallback_samples")) {
    train.perturbation.mc_fallback_samples = static_cast<int>(
        integer_at(j["mc_fallback_samples"], "train.mc_fallback_samples"));
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw ConfigError("train.seed: expected a non-negative integer");
    }
    train.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("threads")) train.threads = static_cast<int>(integer_at(j["threads"], "train.threads"));
}

std::pair<int, int> line_and_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::optional<double> optional_number(const std::string& field) {
  if (field.empty()) return std::nullopt;
  return parse_double(field);
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

void write_rows(const ExperimentConfig& config,
                const std::vector<SweepRecord>& rows,
                const CommandOptions& options, std::ostream& out) {
  const std::size_t n_params = static_cast<std::size_t>(config.form.param_count());
  if (options.out_path) {
    std::ofstream file(*options.out_path, std::ios::binary);
    if (!file) {
      throw ConfigError("cannot open output file " + *options.out_path);
    }
    write_sweep_csv(file, rows, n_params);
  } else {
    write_sweep_csv(out, rows, n_params);
  }
}

std::string vector_text(const Matrix& m) {
  std::string s;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8g", m.data()[i]);
    if (i > 0) s += ' ';
    s += buf;
  }
  return "[" + s + "]";
}

Vector theta_from(const ExperimentConfig& config, const CommandOptions& options) {
  if (!options.theta) {
    throw ConfigError("--theta or --theta-file is required");
  }
  if (static_cast<Eigen::Index>(options.theta->size()) !=
      config.form.param_count()) {
    throw ConfigError("theta: policy " + config.form.name() + " expects " +
                      std::to_string(config.form.param_count()) +
                      " values, got " + std::to_string(options.theta->size()));
  }
  return Eigen::Map<const Vector>(options.theta->data(),
                                  static_cast<Eigen::Index>(options.theta->size()));
}

void print_margins(const MarginReport& report, std::ostream& out) {
  out << "gain_interval: [" << format_double(report.gain.lower) << ", "
      << format_double(report.gain.upper) << "]\n";
  if (report.phase.has_crossover) {
    out << "phase_margin_deg: " << format_double(report.phase.degrees) << "\n";
  } else {
    out << "phase_margin_deg: inf (no unit-gain crossover)\n";
  }
  out << "disk_alpha: " << format_double(report.disk.alpha) << "\n";
  out << "disk_margin: " << format_double(report.disk.margin) << "\n";
}

json number_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    plant.validate();
  } catch (const InvalidModel& e) {
    throw ConfigError(std::string("plant.") + e.what());
  }
  if (plant.input_dim() < 1) {
    throw ConfigError("plant: input dimension must be positive");
  }
  if (form.param_count() > 0 && (plant.input_dim() != 1 || plant.output_dim() != 1)) {
    throw ConfigError(
        "policy: the built-in policy forms are single-input single-output, "
        "but the plant has nu=" + std::to_string(plant.input_dim()) +
        ", ny=" + std::to_string(plant.output_dim()));
  }
  try {
    train.validate(form.param_count());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("train: ") + e.what());
  }
  if (sweep_levels.empty()) {
    throw ConfigError("sweep.levels: at least one level is required");
  }
  for (std::size_t i = 0; i < sweep_levels.size(); ++i) {
    if (!(sweep_levels[i] >= 0.0) || !std::isfinite(sweep_levels[i])) {
      throw ConfigError("sweep.levels: levels must be finite and >= 0");
    }
    if (i > 0 && !(sweep_levels[i] > sweep_levels[i - 1])) {
      throw ConfigError("sweep.levels: levels must be strictly ascending");
    }
  }
  if (trials < 1) {
    throw ConfigError("sweep.trials: must be >= 1");
  }
}

ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig config;
  config.name = std::string(name);
  config.sweep_levels = {0.0, 0.1, 0.2, 0.3, 0.4};
  config.train.n_init = 500;
  if (name == "doyle") {
    config.plant = presets::doyle_plant();
    config.form = PolicyForm::companion2();
    config.train.hypercube = presets::doyle_hypercube();
    config.train.n_steps = 100;
    config.trials = 20;
  } else if (name == "flexible") {
    config.plant = presets::flexible_plant();
    config.form = PolicyForm::ctrb_canonical(3);
    config.train.hypercube = presets::flexible_hypercube();
    config.train.n_steps = 1000;
    config.trials = 25;
  } else {
    throw ConfigError("unknown preset \"" + std::string(name) +
                      "\" (expected doyle or flexible)");
  }
  return config;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(json_text, e.byte);
    throw ConfigError("config:" + std::to_string(line) + ":" +
                      std::to_string(column) + ": invalid JSON (" + e.what() +
                      ")");
  }
  require_object(root, "config");
  reject_unknown_keys(root, "", {"preset", "name", "plant", "policy", "train", "sweep"});

  ExperimentConfig config;
  if (root.contains("preset")) {
    if (!root["preset"].is_string()) {
      throw ConfigError("preset: expected a string");
    }
    config = preset_config(root["preset"].get<std::string>());
  } else if (!root.contains("plant")) {
    throw ConfigError("plant: required when no preset is given");
  }
  if (root.contains("name")) {
    if (!root["name"].is_string()) throw ConfigError("name: expected a string");
    config.name = root["name"].get<std::string>();
  }
  if (root.contains("plant")) config.plant = parse_plant(root["plant"]);
  if (root.contains("policy")) config.form = parse_form(root["policy"]);
  if (root.contains("train")) parse_train(root["train"], config.train);
  if (root.contains("sweep")) {
    const json& sweep = require_object(root["sweep"], "sweep");
    reject_unknown_keys(sweep, "sweep.", {"levels", "trials"});
    if (sweep.contains("levels")) {
      config.sweep_levels = number_list(sweep["levels"], "sweep.levels");
    }
    if (sweep.contains("trials")) {
      config.trials = static_cast<int>(integer_at(sweep["trials"], "sweep.trials"));
    }
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read config file " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_double(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || ptr != body.data() + body.size() || body.empty()) {
    throw ConfigError("not a number: \"" + std::string(text) + "\"");
  }
  return value;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) {
      out.push_back(parse_double(token));
      token.clear();
    }
  };
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return out;
}

std::string sweep_csv_header(std::size_t n_params) {
  std::string header = "b,trial,seed,J,cost,md,alpha,gain_lo,gain_hi,phase_deg";
  for (std::size_t k = 1; k <= n_params; ++k) {
    header += ",theta" + std::to_string(k);
  }
  return header;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& rows,
                     std::size_t n_params) {
  out << sweep_csv_header(n_params) << "\n";
  for (const SweepRecord& r : rows) {
    if (r.theta.size() != n_params) {
      throw DimensionMismatch("sweep row has the wrong number of parameters");
    }
    out << format_double(r.b) << ',' << r.trial << ',' << r.seed << ','
        << format_double(r.reward) << ',' << format_double(r.cost) << ','
        << optional_field(r.disk_margin) << ',' << optional_field(r.disk_alpha)
        << ',' << optional_field(r.gain_lo) << ',' << optional_field(r.gain_hi)
        << ',' << optional_field(r.phase_deg);
    for (double t : r.theta) out << ',' << format_double(t);
    out << "\n";
  }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("csv: missing header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < kFixedColumns) {
    throw ConfigError("csv: header has too few columns");
  }
  const std::size_t n_params = header.size() - kFixedColumns;
  if (line != sweep_csv_header(n_params)) {
    throw ConfigError("csv: unexpected header \"" + line + "\"");
  }

  std::vector<SweepRecord> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw ConfigError("csv:" + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, got " +
                        std::to_string(f.size()));
    }
    try {
      SweepRecord r;
      r.b = parse_double(f[0]);
      r.trial = std::stoi(f[1]);
      r.seed = std::stoull(f[2]);
      r.reward = parse_double(f[3]);
      r.cost = parse_double(f[4]);
      r.disk_margin = optional_number(f[5]);
      r.disk_alpha = optional_number(f[6]);
      r.gain_lo = optional_number(f[7]);
      r.gain_hi = optional_number(f[8]);
      r.phase_deg = optional_number(f[9]);
      for (std::size_t k = 0; k < n_params; ++k) {
        r.theta.push_back(parse_double(f[kFixedColumns + k]));
      }
      rows.push_back(std::move(r));
    } catch (const std::logic_error& e) {
      throw ConfigError("csv:" + std::to_string(line_no) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("csv:" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<LevelSummary> summarize(const std::vector<SweepRecord>& rows) {
  std::map<double, std::vector<const SweepRecord*>> by_level;
  for (const SweepRecord& r : rows) by_level[r.b].push_back(&r);

  std::vector<LevelSummary> out;
  for (const auto& [b, group] : by_level) {
    LevelSummary s;
    s.b = b;
    s.trials = static_cast<int>(group.size());
    std::vector<double> md;
    std::vector<double> cost;
    for (const SweepRecord* r : group) {
      if (std::isfinite(r->cost) && r->disk_margin) {
        md.push_back(*r->disk_margin);
        cost.push_back(r->cost);
      }
    }
    s.finite = static_cast<int>(md.size());
    if (!md.empty()) {
      s.md_mean = mean_of(md);
      s.md_std = sample_std(md, *s.md_mean);
      s.cost_mean = mean_of(cost);
      s.cost_std = sample_std(cost, *s.cost_mean);
    }
    out.push_back(s);
  }
  return out;
}

void write_summary_csv(std::ostream& out,
                       const std::vector<LevelSummary>& levels,
                       const std::optional<LqgReference>& lqg) {
  out << "kind,b,trials,finite,md_mean,md_std,cost_mean,cost_std\n";
  for (const LevelSummary& s : levels) {
    out << "level," << format_double(s.b) << ',' << s.trials << ','
        << s.finite << ',' << optional_field(s.md_mean) << ','
        << optional_field(s.md_std) << ',' << optional_field(s.cost_mean)
        << ',' << optional_field(s.cost_std) << "\n";
  }
  if (lqg) {
    out << "lqg,,,," << optional_field(lqg->disk_margin) << ",,"
        << format_double(lqg->cost) << ",\n";
  }
}

std::string summary_path_for(const std::string& sweep_path) {
  const std::string suffix = ".csv";
  if (sweep_path.size() > suffix.size() &&
      sweep_path.compare(sweep_path.size() - suffix.size(), suffix.size(),
                         suffix) == 0) {
    return sweep_path.substr(0, sweep_path.size() - suffix.size()) +
           ".summary.csv";
  }
  return sweep_path + ".summary.csv";
}

std::vector<SweepRecord> run_trials(const ExperimentConfig& config,
                                    const std::vector<double>& levels,
                                    int trials, std::uint64_t seed) {
  std::vector<SweepRecord> rows;
  for (double b : levels) {
    for (int t = 0; t < trials; ++t) {
      TrainConfig tc = config.train;
      tc.perturbation.b = b;
      tc.seed = trial_seed(seed, t);
      const TrainResult result = train(config.plant, config.form, tc);

      SweepRecord row;
      row.b = b;
      row.trial = t;
      row.seed = tc.seed;
      row.reward = result.reward_opt;
      row.cost = -result.reward_opt;
      row.theta.assign(result.theta_opt.data(),
                       result.theta_opt.data() + result.theta_opt.size());
      if (result.found_stable()) {
        try {
          const MarginReport m = analyze_margins(
              config.plant, realize(PolicyParams{config.form, result.theta_opt}));
          row.disk_margin = m.disk.margin;
          row.disk_alpha = m.disk.alpha;
          row.gain_lo = m.gain.lower;
          row.gain_hi = m.gain.upper;
          row.phase_deg = m.phase.degrees;
        } catch (const UnstableNominal&) {
          // Margins stay undefined.
        }
      }
      rows.push_back(std::move(row));
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRecord& a, const SweepRecord& b) {
                     return a.b != b.b ? a.b < b.b : a.trial < b.trial;
                   });
  return rows;
}

std::optional<LqgReference> lqg_reference(const PlantModel& plant) {
  try {
    const LqgController c = lqg_gains(plant);
    const LtiController k = c.realization(plant);
    LqgReference ref;
    ref.cost = lqg_cost(plant, k);
    ref.disk_margin = disk_margin(plant, k).margin;
    return ref;
  } catch (const Error&) {
    return std::nullopt;
  }
}

int cmd_lqg(const ExperimentConfig& config, const CommandOptions& options,
            std::ostream& out) {
  LqgController c;
  try {
    c = lqg_gains(config.plant);
  } catch (const NoStabilizingSolution& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  const LtiController k = c.realization(config.plant);
  const double cost = lqg_cost(config.plant, k);
  const MarginReport margins = analyze_margins(config.plant, k);

  std::optional<Vector> theta;
  std::string theta_note;
  try {
    theta = to_companion(k);
  } catch (const NotRepresentable& e) {
    theta_note = e.what();
  }

  out << "K: " << vector_text(c.K) << "\n";
  out << "L: " << vector_text(c.L) << "\n";
  out << "J_LQG: " << format_double(cost) << "\n";
  print_margins(margins, out);
  if (theta) {
    out << "theta_lqg: " << vector_text(*theta) << "\n";
  } else if (!options.quiet) {
    out << "theta_lqg: not representable (" << theta_note << ")\n";
  }

  if (options.out_path) {
    json report;
    report["K"] = std::vector<double>(c.K.data(), c.K.data() + c.K.size());
    report["L"] = std::vector<double>(c.L.data(), c.L.data() + c.L.size());
    report["cost"] = cost;
    report["gain_lo"] = number_or_null(margins.gain.lower);
    report["gain_hi"] = number_or_null(margins.gain.upper);
    report["phase_deg"] = number_or_null(margins.phase.degrees);
    report["alpha"] = margins.disk.alpha;
    report["md"] = number_or_null(margins.disk.margin);
    if (theta) {
      report["theta_lqg"] =
          std::vector<double>(theta->data(), theta->data() + theta->size());
    }
    std::ofstream file(*options.out_path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file " + *options.out_path);
    file << report.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_train(const ExperimentConfig& config, const CommandOptions& options,
              std::ostream& out) {
  double b = config.train.perturbation.b;
  if (options.levels) {
    if (options.levels->size() != 1) {
      throw ConfigError("--b: train takes a single perturbation level");
    }
    b = options.levels->front();
    if (!(b >= 0.0)) throw ConfigError("--b: level must be >= 0");
  }
  const int trials = options.trials.value_or(config.trials);
  if (trials < 1) throw ConfigError("--trials: must be >= 1");

  const std::vector<SweepRecord> rows =
      run_trials(config, {b}, trials, options.seed);
  write_rows(config, rows, options, out);

  const auto best = std::max_element(
      rows.begin(), rows.end(),
      [](const SweepRecord& a, const SweepRecord& c) { return a.reward < c.reward; });
  if (!std::isfinite(best->reward)) {
    if (!options.quiet) std::cerr << "no stabilizing policy found\n";
    return kExitNoStabilizingPolicy;
  }
  if (options.out_path && !options.quiet) {
    out << "best cost " << format_double(best->cost) << " (trial "
        << best->trial << ", md " << optional_field(best->disk_margin)
        << ")\n";
  }
  return kExitOk;
}

int cmd_sweep(const ExperimentConfig& config, const CommandOptions& options,
              std::ostream& out) {
  std::vector<double> levels = options.levels.value_or(config.sweep_levels);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] >= 0.0) || (i > 0 && !(levels[i] > levels[i - 1]))) {
      throw ConfigError("--b: levels must be >= 0 and strictly ascending");
    }
  }
  if (levels.empty()) throw ConfigError("--b: at least one level is required");
  const int trials = options.trials.value_or(config.trials);
  if (trials < 1) throw ConfigError("--trials: must be >= 1");

  const std::vector<SweepRecord> rows =
      run_trials(config, levels, trials, options.seed);
  write_rows(config, rows, options, out);

  const std::vector<LevelSummary> summary = summarize(rows);
  const std::optional<LqgReference> lqg = lqg_reference(config.plant);
  if (options.out_path) {
    const std::string path = summary_path_for(*options.out_path);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file " + path);
    write_summary_csv(file, summary, lqg);
    if (!options.quiet) write_summary_csv(out, summary, lqg);
  }
  return kExitOk;
}

int cmd_margins(const ExperimentConfig& config, const CommandOptions& options,
                std::ostream& out) {
  const PolicyParams policy{config.form, theta_from(config, options)};
  const LtiController k = realize(policy);
  MarginReport report;
  try {
    report = analyze_margins(config.plant, k);
  } catch (const UnstableNominal& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnstableNominal;
  }
  print_margins(report, out);
  const RewardEval eval =
      exact_reward(config.plant, policy, zero_perturbation(config.plant));
  out << "J: " << format_double(eval.value) << "\n";
  return kExitOk;
}

int cmd_simulate(const ExperimentConfig& config, const CommandOptions& options,
                 std::ostream& out) {
  LtiController k;
  if (options.theta) {
    k = realize(PolicyParams{config.form, theta_from(config, options)});
  } else {
    k = lqg_gains(config.plant).realization(config.plant);
  }
  Vector delta = zero_perturbation(config.plant);
  if (options.levels) {
    if (options.levels->size() != 1) {
      throw ConfigError("--b: simulate takes a single fixed perturbation delta");
    }
    delta.setConstant(options.levels->front());
  }
  if (options.horizon < 1 || options.episodes < 1) {
    throw ConfigError("--horizon and --episodes must be >= 1");
  }
  const ClosedLoop loop = assemble(config.plant, k, delta);
  if (!is_schur_stable(loop.A_bar).stable) {
    std::cerr << "error: closed loop is not Schur stable\n";
    return kExitUnstableNominal;
  }
  McEstimate mc;
  try {
    mc = mc_reward(config.plant, k, delta, options.horizon, options.episodes,
                   options.seed);
  } catch (const RolloutOverflow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnstableNominal;
  }
  const Matrix X = solve_dlyap(loop.A_bar, loop.W_bar);
  const double exact = -frobenius_inner(loop.M, X);
  out << "mc_mean: " << format_double(mc.mean) << "\n";
  out << "mc_std_error: " << format_double(mc.std_error) << "\n";
  out << "episodes: " << mc.episodes << "\n";
  out << "horizon: " << mc.horizon << "\n";
  out << "exact_reward: " << format_double(exact) << "\n";
  out << "finite_horizon_reward: "
      << format_double(finite_horizon_reward(config.plant, k, delta,
                                             options.horizon))
      << "\n";
  return kExitOk;
}

}  // namespace lqgrl
