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

#ifndef CFMEA_EXPERIMENT_HPP_
#define CFMEA_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "cfmea/countergan.hpp"
#include "cfmea/dataset.hpp"
#include "cfmea/extraction.hpp"
#include "cfmea/metrics.hpp"
#include "cfmea/model_io.hpp"

namespace cfmea {

/// Where differential privacy is injected. Derived per grid cell from the
/// (model_noise, explainer_noise) pair.
enum class Scenario {
  no_dp,
  dp_model,
  dp_explainer,
  dp_model_explainer,
};

Scenario scenario_for(double model_noise, double explainer_noise);
std::string_view scenario_name(Scenario s);
Scenario scenario_from_name(std::string_view name);

struct CsvSource {
  std::string path;
  std::string target_column;
  bool binarize_median = false;
};

struct SyntheticSpec {
  std::size_t n = 2000;
  std::size_t dim = 8;
  double separation = 3.0;
  std::uint64_t seed = 0;
};

struct DatasetSource {
  std::string name = "dataset";
  std::variant<CsvSource, SyntheticSpec> source = SyntheticSpec{};
};

/// Target classifier architecture and hyperparameter grid. The selection
/// rule is best validation accuracy; l2_norm_clips only enter DP cells.
struct TargetGrid {
  std::vector<std::size_t> hidden = {64, 32, 16, 32, 64, 128, 64,  32,
                                     128, 64, 128, 64, 128, 64, 32, 16};
  int epochs = 40;
  int batch_size = 128;
  std::vector<double> learning_rates = {0.001, 0.002, 0.01};
  std::vector<double> l2_norm_clips = {1.0, 1.5};
};

struct ExplainerGrid {
  int epochs = 200;
  int batch_size = 128;
  std::vector<double> learning_rates = {0.05, 0.005, 0.01, 0.001};
  std::vector<double> l2_norm_clips = {1.0, 1.5, 3.0};
  double w_adv = 1.0;
  double w_clf = 1.0;
  double w_prox = 0.1;
  double delta_scale = 2.0;
};

struct AttackGrid {
  int epochs = 300;
  int batch_size = 128;
  double alpha = 0.5;
  double temperature = 2.0;
  std::vector<double> learning_rates = {0.001, 0.01};
};

struct AutoencoderConfig {
  int epochs = 200;
  double learning_rate = 0.001;
};

struct ExperimentPlan {
  int version = 1;
  DatasetSource dataset;
  std::vector<Scenario> scenarios = {Scenario::no_dp, Scenario::dp_model, Scenario::dp_explainer,
                                     Scenario::dp_model_explainer};
  std::vector<double> model_noises = {0.0, 0.1, 0.5, 0.9};
  std::vector<double> explainer_noises = {0.0, 0.1, 0.5, 0.9};
  std::vector<std::size_t> query_budgets = {50, 100, 200, 300, 500, 1000};
  int n_runs = 5;
  std::uint64_t base_seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  TargetGrid target;
  ExplainerGrid explainer;
  AttackGrid attack;
  AutoencoderConfig autoencoder;

  void validate() const;
  /// (model_noise, explainer_noise) pairs whose derived scenario is listed.
  std::vector<std::pair<double, double>> cells() const;
};

ExperimentPlan plan_from_json(const std::string& text);
ExperimentPlan plan_from_file(const std::string& path);

struct ResultRow {
  std::string dataset;
  Scenario scenario = Scenario::no_dp;
  double model_noise = 0.0;
  double explainer_noise = 0.0;
  std::size_t n_queries = 0;
  int run_index = 0;
  double agreement = 0.0;
  double mean_prediction_gain = 0.0;
  double realism = 0.0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const ResultRow&) const = default;
};

struct ResultsTable {
  std::vector<ResultRow> rows;
  /// Per-cell diagnostics for cells that failed; not serialized to CSV.
  std::vector<std::string> failures;
};

/// Split, standardized views of one dataset source. `fit` is the 90% of the
/// training split models train on; `val` is the 10% selection carve-out.
struct PreparedData {
  std::string name;
  Dataset train;  // full standardized training split (autoencoder, realism)
  Dataset fit;
  Dataset val;
  Dataset test;
  Standardizer scaler;

  std::size_t dim() const { return train.dim(); }
};

Dataset load_source(const DatasetSource& source);
PreparedData prepare_data(const DatasetSource& source, std::uint64_t base_seed);

struct TargetArtifact {
  DenseNetwork net;
  ClassificationReport test_report;
  double learning_rate = 0.0;  // selected
  double l2_norm_clip = 0.0;   // selected; 0 when no DP
};

/// Trains one target per model-noise level, selecting hyperparameters by
/// validation accuracy over the grid.
TargetArtifact train_target_for_noise(const PreparedData& data, const TargetGrid& grid,
                                      double model_noise, std::uint64_t seed);

struct ExplainerArtifact {
  GeneratorNet generator;
  DiscriminatorNet discriminator;
  double learning_rate = 0.0;
  double l2_norm_clip = 0.0;
};

/// Trains the cell's explainer, selecting hyperparameters by mean validation
/// prediction gain.
ExplainerArtifact train_explainer_for_cell(const PreparedData& data, const ExplainerGrid& grid,
                                           const DenseNetwork& target, double explainer_noise,
                                           std::uint64_t seed);

/// Runs the full (model_noise x explainer_noise x budget x run) grid.
/// Deterministic per base_seed regardless of thread count; failed cells are
/// recorded in failures and the rest proceed.
ResultsTable run_plan(const ExperimentPlan& plan);

/// Fixed column order:
/// dataset,scenario,model_noise,explainer_noise,n_queries,run_index,
/// agreement,mean_prediction_gain,realism,accuracy,precision,recall,f1
void emit_csv(const ResultsTable& table, const std::string& path);
ResultsTable parse_results_csv(const std::string& path);

/// One agreement panel per model-noise level, classification-metric bars,
/// and prediction-gain / realism lines versus explainer noise.
void emit_plots(const ResultsTable& table, const std::string& out_dir);

/// Lossless double formatting (shortest of %.15g/%.16g/%.17g that parses
/// back exactly); used for CSV cells.
std::string format_double(double v);

}  // namespace cfmea

#endif  // CFMEA_EXPERIMENT_HPP_
