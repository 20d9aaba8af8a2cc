// Copyright 2026 The cfmea Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cfmea/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "cfmea/error.hpp"
#include "cfmea/svg.hpp"
#include "cfmea/training.hpp"

#include "json.hpp"

namespace cfmea {

namespace {

using nlohmann::json;

std::int64_t noise_key(double noise) { return std::llround(noise * 1e6); }

}  // namespace

Scenario scenario_for(double model_noise, double explainer_noise) {
  if (model_noise < 0.0 || explainer_noise < 0.0) {
    throw ConfigError("noise levels must be >= 0");
  }
  const bool dp_model = model_noise > 0.0;
  const bool dp_explainer = explainer_noise > 0.0;
  if (dp_model && dp_explainer) return Scenario::dp_model_explainer;
  if (dp_model) return Scenario::dp_model;
  if (dp_explainer) return Scenario::dp_explainer;
  return Scenario::no_dp;
}

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::no_dp: return "no_dp";
    case Scenario::dp_model: return "dp_model";
    case Scenario::dp_explainer: return "dp_explainer";
    case Scenario::dp_model_explainer: return "dp_model_explainer";
  }
  throw ConfigError("unknown scenario value");
}

Scenario scenario_from_name(std::string_view name) {
  if (name == "no_dp") return Scenario::no_dp;
  if (name == "dp_model") return Scenario::dp_model;
  if (name == "dp_explainer") return Scenario::dp_explainer;
  if (name == "dp_model_explainer") return Scenario::dp_model_explainer;
  throw ConfigError("invalid scenario: '" + std::string(name) + "'");
}

void ExperimentPlan::validate() const {
  if (version != 1) throw ConfigError("unsupported plan version " + std::to_string(version));
  if (dataset.name.empty() || dataset.name.find(',') != std::string::npos) {
    throw ConfigError("dataset name must be non-empty and comma-free");
  }
  if (scenarios.empty()) throw ConfigError("plan lists no scenarios");
  if (model_noises.empty() || explainer_noises.empty()) {
    throw ConfigError("plan needs at least one model and one explainer noise level");
  }
  for (double s : model_noises) {
    if (s < 0.0) throw ConfigError("model noise must be >= 0");
  }
  for (double s : explainer_noises) {
    if (s < 0.0) throw ConfigError("explainer noise must be >= 0");
  }
  if (query_budgets.empty()) throw ConfigError("plan lists no query budgets");
  for (std::size_t b : query_budgets) {
    if (b < 1) throw ConfigError("query budgets must be >= 1");
  }
  if (n_runs < 1) throw ConfigError("n_runs must be >= 1");
  if (target.epochs < 1 || explainer.epochs < 1 || attack.epochs < 1 || autoencoder.epochs < 1) {
    throw ConfigError("epoch counts must be >= 1");
  }
  if (target.learning_rates.empty() || explainer.learning_rates.empty() ||
      attack.learning_rates.empty()) {
    throw ConfigError("learning-rate grids must be non-empty");
  }
  if (target.l2_norm_clips.empty() || explainer.l2_norm_clips.empty()) {
    throw ConfigError("l2_norm_clip grids must be non-empty");
  }
  if (attack.alpha < 0.0 || attack.alpha > 1.0) throw ConfigError("alpha must be in [0, 1]");
  if (attack.temperature < 1.0) throw ConfigError("temperature must be >= 1");
  if (cells().empty()) {
    throw ConfigError("no (model_noise, explainer_noise) cell matches the listed scenarios");
  }
}

std::vector<std::pair<double, double>> ExperimentPlan::cells() const {
  std::vector<std::pair<double, double>> out;
  for (double mn : model_noises) {
    for (double en : explainer_noises) {
      const Scenario s = scenario_for(mn, en);
      if (std::find(scenarios.begin(), scenarios.end(), s) != scenarios.end()) {
        out.emplace_back(mn, en);
      }
    }
  }
  return out;
}

namespace {

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* name : allowed) {
      if (key == name) ok = true;
    }
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

DatasetSource parse_dataset(const json& obj) {
  if (!obj.is_object()) throw ConfigError("'dataset' must be an object");
  DatasetSource src;
  const std::string kind = obj.value("kind", "");
  if (kind == "csv") {
    require_keys(obj, "dataset", {"kind", "name", "path", "target_column", "binarize_median"});
    CsvSource csv;
    if (!obj.contains("path") || !obj.contains("target_column")) {
      throw ConfigError("csv dataset needs 'path' and 'target_column'");
    }
    csv.path = obj.at("path").get<std::string>();
    csv.target_column = obj.at("target_column").get<std::string>();
    csv.binarize_median = obj.value("binarize_median", false);
    src.name = obj.value("name", std::filesystem::path(csv.path).stem().string());
    src.source = csv;
  } else if (kind == "synthetic_blobs") {
    require_keys(obj, "dataset", {"kind", "name", "n", "dim", "separation", "seed"});
    SyntheticSpec spec;
    spec.n = obj.value("n", spec.n);
    spec.dim = obj.value("dim", spec.dim);
    spec.separation = obj.value("separation", spec.separation);
    spec.seed = obj.value("seed", spec.seed);
    src.name = obj.value("name", std::string("synthetic_blobs"));
    src.source = spec;
  } else {
    throw ConfigError("dataset kind must be 'csv' or 'synthetic_blobs'");
  }
  return src;
}

}  // namespace

ExperimentPlan plan_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("plan is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("plan must be a JSON object");
  require_keys(root, "plan",
               {"version", "dataset", "scenarios", "model_noises", "explainer_noises",
                "query_budgets", "n_runs", "base_seed", "threads", "target", "explainer",
                "attack", "autoencoder"});

  ExperimentPlan plan;
  try {
    plan.version = root.value("version", 1);
    if (!root.contains("dataset")) throw ConfigError("plan needs a 'dataset' entry");
    plan.dataset = parse_dataset(root.at("dataset"));
    if (root.contains("scenarios")) {
      plan.scenarios.clear();
      for (const auto& s : root.at("scenarios")) {
        plan.scenarios.push_back(scenario_from_name(s.get<std::string>()));
      }
    }
    if (root.contains("model_noises")) {
      plan.model_noises = root.at("model_noises").get<std::vector<double>>();
    }
    if (root.contains("explainer_noises")) {
      plan.explainer_noises = root.at("explainer_noises").get<std::vector<double>>();
    }
    if (root.contains("query_budgets")) {
      plan.query_budgets = root.at("query_budgets").get<std::vector<std::size_t>>();
    }
    plan.n_runs = root.value("n_runs", plan.n_runs);
    plan.base_seed = root.value("base_seed", plan.base_seed);
    plan.threads = root.value("threads", plan.threads);

    if (root.contains("target")) {
      const json& t = root.at("target");
      require_keys(t, "target",
                   {"hidden", "epochs", "batch_size", "learning_rates", "l2_norm_clips"});
      if (t.contains("hidden")) plan.target.hidden = t.at("hidden").get<std::vector<std::size_t>>();
      plan.target.epochs = t.value("epochs", plan.target.epochs);
      plan.target.batch_size = t.value("batch_size", plan.target.batch_size);
      if (t.contains("learning_rates")) {
        plan.target.learning_rates = t.at("learning_rates").get<std::vector<double>>();
      }
      if (t.contains("l2_norm_clips")) {
        plan.target.l2_norm_clips = t.at("l2_norm_clips").get<std::vector<double>>();
      }
    }
    if (root.contains("explainer")) {
      const json& e = root.at("explainer");
      require_keys(e, "explainer",
                   {"epochs", "batch_size", "learning_rates", "l2_norm_clips", "w_adv", "w_clf",
                    "w_prox", "delta_scale"});
      plan.explainer.epochs = e.value("epochs", plan.explainer.epochs);
      plan.explainer.batch_size = e.value("batch_size", plan.explainer.batch_size);
      if (e.contains("learning_rates")) {
        plan.explainer.learning_rates = e.at("learning_rates").get<std::vector<double>>();
      }
      if (e.contains("l2_norm_clips")) {
        plan.explainer.l2_norm_clips = e.at("l2_norm_clips").get<std::vector<double>>();
      }
      plan.explainer.w_adv = e.value("w_adv", plan.explainer.w_adv);
      plan.explainer.w_clf = e.value("w_clf", plan.explainer.w_clf);
      plan.explainer.w_prox = e.value("w_prox", plan.explainer.w_prox);
      plan.explainer.delta_scale = e.value("delta_scale", plan.explainer.delta_scale);
    }
    if (root.contains("attack")) {
      const json& a = root.at("attack");
      require_keys(a, "attack",
                   {"epochs", "batch_size", "alpha", "temperature", "learning_rates"});
      plan.attack.epochs = a.value("epochs", plan.attack.epochs);
      plan.attack.batch_size = a.value("batch_size", plan.attack.batch_size);
      plan.attack.alpha = a.value("alpha", plan.attack.alpha);
      plan.attack.temperature = a.value("temperature", plan.attack.temperature);
      if (a.contains("learning_rates")) {
        plan.attack.learning_rates = a.at("learning_rates").get<std::vector<double>>();
      }
    }
    if (root.contains("autoencoder")) {
      const json& ae = root.at("autoencoder");
      require_keys(ae, "autoencoder", {"epochs", "learning_rate"});
      plan.autoencoder.epochs = ae.value("epochs", plan.autoencoder.epochs);
      plan.autoencoder.learning_rate = ae.value("learning_rate", plan.autoencoder.learning_rate);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed plan value: ") + e.what());
  }
  plan.validate();
  return plan;
}

ExperimentPlan plan_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open plan file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return plan_from_json(buffer.str());
}

Dataset load_source(const DatasetSource& source) {
  if (const auto* csv = std::get_if<CsvSource>(&source.source)) {
    return make_dataset(load_csv(csv->path, csv->target_column), csv->binarize_median);
  }
  const auto& spec = std::get<SyntheticSpec>(source.source);
  return synthetic_blobs(spec.n, spec.dim, spec.separation, spec.seed);
}

PreparedData prepare_data(const DatasetSource& source, std::uint64_t base_seed) {
  Dataset full = load_source(source);
  auto [train_raw, test_raw] = split(full, SplitSpec{0.8, derive_seed(base_seed, "split")});

  PreparedData data;
  data.name = source.name;
  data.scaler = Standardizer::fit(train_raw.features);
  data.train = {data.scaler.transform(train_raw.features), train_raw.labels,
                train_raw.feature_names};
  data.test = {data.scaler.transform(test_raw.features), test_raw.labels,
               test_raw.feature_names};

  // 10% selection carve-out of the training split.
  RandomEngine carve_rng(derive_seed(base_seed, "val"));
  std::vector<std::size_t> perm = carve_rng.permutation(data.train.size());
  const std::size_t n_val = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(data.train.size()))));
  auto gather = [&](std::size_t begin, std::size_t end) {
    Dataset part;
    part.feature_names = data.train.feature_names;
    part.features = Matrix(end - begin, data.train.dim());
    part.labels.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      auto src = data.train.features.row(perm[i]);
      auto dst = part.features.row(i - begin);
      std::copy(src.begin(), src.end(), dst.begin());
      part.labels.push_back(data.train.labels[perm[i]]);
    }
    return part;
  };
  data.val = gather(0, n_val);
  data.fit = gather(n_val, data.train.size());
  return data;
}

TargetArtifact train_target_for_noise(const PreparedData& data, const TargetGrid& grid,
                                      double model_noise, std::uint64_t seed) {
  const bool dp = model_noise > 0.0;
  const std::vector<double> clips = dp ? grid.l2_norm_clips : std::vector<double>{0.0};

  TargetArtifact best;
  double best_acc = -1.0;
  std::string last_error;
  for (double lr : grid.learning_rates) {
    for (double clip : clips) {
      try {
        RandomEngine init_rng(derive_seed(seed, "init"));
        DenseNetwork net = make_mlp(data.dim(), grid.hidden, Activation::gelu, 2,
                                    Activation::softmax, init_rng);
        TrainConfig cfg;
        cfg.epochs = grid.epochs;
        cfg.batch_size = grid.batch_size;
        cfg.learning_rate = lr;
        if (dp) cfg.dp = DpConfig{clip, model_noise, seed};
        train_classifier(net, data.fit.features, data.fit.labels, cfg,
                         RandomEngine(derive_seed(seed, "train")));
        const double acc = classification_report(net, data.val).accuracy;
        if (acc > best_acc) {
          best_acc = acc;
          best.net = std::move(net);
          best.learning_rate = lr;
          best.l2_norm_clip = dp ? clip : 0.0;
        }
      } catch (const TrainingError& e) {
        last_error = e.what();
      }
    }
  }
  if (best_acc < 0.0) {
    throw TrainingError("every target candidate diverged; last error: " + last_error);
  }
  best.test_report = classification_report(best.net, data.test);
  return best;
}

ExplainerArtifact train_explainer_for_cell(const PreparedData& data, const ExplainerGrid& grid,
                                           const DenseNetwork& target, double explainer_noise,
                                           std::uint64_t seed) {
  const bool dp = explainer_noise > 0.0;
  const std::vector<double> clips = dp ? grid.l2_norm_clips : std::vector<double>{0.0};

  ExplainerArtifact best;
  double best_gain = -2.0;  // gains live in [-1, 1]
  std::string last_error;
  for (double lr : grid.learning_rates) {
    for (double clip : clips) {
      try {
        ExplainerConfig cfg;
        cfg.epochs = grid.epochs;
        cfg.batch_size = grid.batch_size;
        cfg.learning_rate = lr;
        cfg.w_adv = grid.w_adv;
        cfg.w_clf = grid.w_clf;
        cfg.w_prox = grid.w_prox;
        cfg.delta_scale = grid.delta_scale;
        if (dp) cfg.dp = DpConfig{clip, explainer_noise, seed};
        ExplainerPair pair = train_countergan(target, data.fit.features, cfg,
                                              RandomEngine(derive_seed(seed, "gan")));
        const double gain = mean_prediction_gain(target, pair.generator, data.val.features);
        if (gain > best_gain) {
          best_gain = gain;
          best.generator = std::move(pair.generator);
          best.discriminator = std::move(pair.discriminator);
          best.learning_rate = lr;
          best.l2_norm_clip = dp ? clip : 0.0;
        }
      } catch (const std::runtime_error& e) {
        last_error = e.what();
      }
    }
  }
  if (best_gain < -1.5) {
    throw TrainingError("every explainer candidate failed; last error: " + last_error);
  }
  return best;
}

namespace {

void parallel_for(std::size_t n_jobs, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (n_jobs == 0) return;
  unsigned n_threads = threads > 0 ? threads : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(n_jobs)));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < n_jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_jobs) break;
        fn(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace

ResultsTable run_plan(const ExperimentPlan& plan) {
  plan.validate();
  const PreparedData data = prepare_data(plan.dataset, plan.base_seed);
  const DenseNetwork ae =
      train_autoencoder(data.train.features, plan.autoencoder.epochs,
                        plan.autoencoder.learning_rate, derive_seed(plan.base_seed, "autoencoder"));

  const auto threads = static_cast<unsigned>(plan.threads < 0 ? 0 : plan.threads);
  const std::vector<std::pair<double, double>> cells = plan.cells();

  // Targets depend only on the model-noise level and are shared across cells.
  std::vector<double> model_levels;
  for (const auto& [mn, en] : cells) {
    if (std::find(model_levels.begin(), model_levels.end(), mn) == model_levels.end()) {
      model_levels.push_back(mn);
    }
  }
  std::map<std::int64_t, TargetArtifact> targets;
  std::map<std::int64_t, std::string> target_failures;
  for (double mn : model_levels) targets[noise_key(mn)];  // preallocate slots
  parallel_for(model_levels.size(), threads, [&](std::size_t i) {
    const double mn = model_levels[i];
    try {
      targets[noise_key(mn)] = train_target_for_noise(
          data, plan.target, mn, derive_seed(plan.base_seed, "target", noise_key(mn)));
    } catch (const std::runtime_error& e) {
      target_failures[noise_key(mn)] = e.what();
    }
  });

  std::vector<std::vector<ResultRow>> cell_rows(cells.size());
  std::vector<std::string> cell_failures(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t c) {
    const auto [mn, en] = cells[c];
    std::ostringstream cell_tag;
    cell_tag << "cell(model_noise=" << mn << ", explainer_noise=" << en << ")";
    try {
      if (auto it = target_failures.find(noise_key(mn)); it != target_failures.end()) {
        throw TrainingError("target unavailable: " + it->second);
      }
      const TargetArtifact& target = targets.at(noise_key(mn));
      const ExplainerArtifact explainer = train_explainer_for_cell(
          data, plan.explainer, target.net, en,
          derive_seed(plan.base_seed, "explainer", noise_key(mn), noise_key(en)));

      const double gain = mean_prediction_gain(target.net, explainer.generator,
                                               data.test.features);
      const Matrix test_cfs = generate_cf(explainer.generator, data.test.features);
      const double cf_realism = realism(ae, test_cfs);

      ResultRow base;
      base.dataset = data.name;
      base.scenario = scenario_for(mn, en);
      base.model_noise = mn;
      base.explainer_noise = en;
      base.mean_prediction_gain = gain;
      base.realism = cf_realism;
      base.accuracy = target.test_report.accuracy;
      base.precision = target.test_report.precision;
      base.recall = target.test_report.recall;
      base.f1 = target.test_report.f1;

      for (std::size_t budget : plan.query_budgets) {
        for (int run = 0; run < plan.n_runs; ++run) {
          AttackConfig atk;
          atk.n_queries = budget;
          atk.alpha = plan.attack.alpha;
          atk.temperature = plan.attack.temperature;
          atk.epochs = plan.attack.epochs;
          atk.batch_size = plan.attack.batch_size;
          if (plan.attack.learning_rates.size() == 1) {
            atk.learning_rate = plan.attack.learning_rates.front();
          } else {
            atk.learning_rate_grid = plan.attack.learning_rates;
          }
          atk.seed = derive_seed(plan.base_seed, "attack", noise_key(mn), noise_key(en),
                                 static_cast<std::uint64_t>(budget),
                                 static_cast<std::uint64_t>(run));
          const DenseNetwork surrogate = run_attack(target.net, explainer.generator, atk);
          ResultRow row = base;
          row.n_queries = budget;
          row.run_index = run;
          row.agreement = agreement(target.net, surrogate, data.test.features);
          cell_rows[c].push_back(std::move(row));
        }
      }
    } catch (const std::exception& e) {
      cell_failures[c] = cell_tag.str() + ": " + e.what();
      cell_rows[c].clear();
    }
  });

  ResultsTable table;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (ResultRow& row : cell_rows[c]) table.rows.push_back(std::move(row));
    if (!cell_failures[c].empty()) table.failures.push_back(cell_failures[c]);
  }
  return table;
}

std::string format_double(double v) {
  char buf[40];
  if (!std::isfinite(v)) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }
  for (int prec : {15, 16, 17}) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

namespace {

constexpr const char* kCsvHeader =
    "dataset,scenario,model_noise,explainer_noise,n_queries,run_index,agreement,"
    "mean_prediction_gain,realism,accuracy,precision,recall,f1";

}  // namespace

void emit_csv(const ResultsTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValueError("emit_csv: cannot open for writing: " + path);
  out << kCsvHeader << "\n";
  for (const ResultRow& r : table.rows) {
    out << r.dataset << ',' << scenario_name(r.scenario) << ',' << format_double(r.model_noise)
        << ',' << format_double(r.explainer_noise) << ',' << r.n_queries << ',' << r.run_index
        << ',' << format_double(r.agreement) << ',' << format_double(r.mean_prediction_gain)
        << ',' << format_double(r.realism) << ',' << format_double(r.accuracy) << ','
        << format_double(r.precision) << ',' << format_double(r.recall) << ','
        << format_double(r.f1) << "\n";
  }
  if (!out) throw ValueError("emit_csv: write failed: " + path);
}

ResultsTable parse_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open results file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw IngestError("results file has an unexpected header: " + path);
  }
  ResultsTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 13) {
      throw IngestError("results line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected 13");
    }
    ResultRow r;
    r.dataset = fields[0];
    r.scenario = scenario_from_name(fields[1]);
    r.model_noise = std::strtod(fields[2].c_str(), nullptr);
    r.explainer_noise = std::strtod(fields[3].c_str(), nullptr);
    r.n_queries = std::strtoull(fields[4].c_str(), nullptr, 10);
    r.run_index = static_cast<int>(std::strtol(fields[5].c_str(), nullptr, 10));
    r.agreement = std::strtod(fields[6].c_str(), nullptr);
    r.mean_prediction_gain = std::strtod(fields[7].c_str(), nullptr);
    r.realism = std::strtod(fields[8].c_str(), nullptr);
    r.accuracy = std::strtod(fields[9].c_str(), nullptr);
    r.precision = std::strtod(fields[10].c_str(), nullptr);
    r.recall = std::strtod(fields[11].c_str(), nullptr);
    r.f1 = std::strtod(fields[12].c_str(), nullptr);
    table.rows.push_back(std::move(r));
  }
  return table;
}

namespace {

std::string noise_label(double noise, const char* dp_prefix) {
  if (noise <= 0.0) return "No DP";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s-%g", dp_prefix, noise);
  return buf;
}

std::string noise_filename(double noise) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", noise);
  return buf;
}

template <class T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

void emit_plots(const ResultsTable& table, const std::string& out_dir) {
  if (table.rows.empty()) throw ValueError("emit_plots: empty results table");
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  std::vector<double> model_levels, explainer_levels;
  std::vector<std::size_t> budgets;
  for (const ResultRow& r : table.rows) {
    model_levels.push_back(r.model_noise);
    explainer_levels.push_back(r.explainer_noise);
    budgets.push_back(r.n_queries);
  }
  model_levels = sorted_unique(std::move(model_levels));
  explainer_levels = sorted_unique(std::move(explainer_levels));
  budgets = sorted_unique(std::move(budgets));

  auto mean_over_runs = [&](double mn, double en, std::size_t budget, auto&& select) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const ResultRow& r : table.rows) {
      if (noise_key(r.model_noise) == noise_key(mn) &&
          noise_key(r.explainer_noise) == noise_key(en) &&
          (budget == 0 || r.n_queries == budget)) {
        sum += select(r);
        ++n;
      }
    }
    return n > 0 ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
  };

  // Agreement panels: one chart per model-noise level, one series per
  // explainer-noise level, x = query budget, y = mean agreement over runs.
  for (double mn : model_levels) {
    LineChart chart;
    chart.title = "MEA agreement - model " + noise_label(mn, "DP-Model");
    chart.x_label = "queries";
    chart.y_label = "agreement";
    for (double en : explainer_levels) {
      Series series;
      series.name = noise_label(en, "DP-Explainer");
      for (std::size_t b : budgets) {
        const double v = mean_over_runs(mn, en, b, [](const ResultRow& r) { return r.agreement; });
        if (!std::isnan(v)) {
          series.x.push_back(static_cast<double>(b));
          series.y.push_back(v);
        }
      }
      if (!series.x.empty()) chart.series.push_back(std::move(series));
    }
    if (!chart.series.empty()) {
      write_text_file((dir / ("agreement_model_noise_" + noise_filename(mn) + ".svg")).string(),
                      render_line_chart(chart));
    }
  }

  // Classification metrics of the target per model-noise level.
  {
    BarChart chart;
    chart.title = "Target model performance";
    chart.y_label = "score";
    chart.group_labels = {"Accuracy", "Precision", "Recall", "F1-Score"};
    for (double mn : model_levels) chart.series_names.push_back(noise_label(mn, "DP-Model"));
    chart.values.assign(4, std::vector<double>(model_levels.size(), 0.0));
    for (std::size_t m = 0; m < model_levels.size(); ++m) {
      double acc = 0.0, prec = 0.0, rec = 0.0, f1 = 0.0;
      std::size_t n = 0;
      for (const ResultRow& r : table.rows) {
        if (noise_key(r.model_noise) != noise_key(model_levels[m])) continue;
        acc += r.accuracy;
        prec += r.precision;
        rec += r.recall;
        f1 += r.f1;
        ++n;
      }
      const double inv = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
      chart.values[0][m] = acc * inv;
      chart.values[1][m] = prec * inv;
      chart.values[2][m] = rec * inv;
      chart.values[3][m] = f1 * inv;
    }
    write_text_file((dir / "model_performance.svg").string(), render_bar_chart(chart));
  }

  // Prediction gain and realism versus explainer noise, one series per
  // model-noise level.
  for (const char* which : {"prediction_gain", "realism"}) {
    LineChart chart;
    chart.title = which == std::string("prediction_gain")
                      ? "Counterfactual prediction gain"
                      : "Counterfactual realism";
    chart.x_label = "explainer noise level";
    chart.y_label = which == std::string("prediction_gain") ? "prediction gain" : "realism";
    for (double mn : model_levels) {
      Series series;
      series.name = noise_label(mn, "DP-Model");
      for (double en : explainer_levels) {
        const double v = mean_over_runs(mn, en, 0, [&](const ResultRow& r) {
          return which == std::string("prediction_gain") ? r.mean_prediction_gain : r.realism;
        });
        if (!std::isnan(v)) {
          series.x.push_back(en);
          series.y.push_back(v);
        }
      }
      if (!series.x.empty()) chart.series.push_back(std::move(series));
    }
    if (!chart.series.empty()) {
      write_text_file((dir / (std::string(which) + ".svg")).string(), render_line_chart(chart));
    }
  }
}

}  // namespace cfmea
