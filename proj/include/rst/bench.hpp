#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rst/dataset.hpp"
#include "rst/ensemble.hpp"

namespace rst {
namespace bench {

/// One dataset cell of an experiment: either a UCR train/test file pair
/// or a seeded synthetic specification.
struct DatasetSpec {
  std::string name;
  std::string train_path;  // empty for synthetic
  std::string test_path;
  bool synthetic = false;
  int synth_n_per_class = 50;
  int synth_length = 64;
  double synth_noise = 0.3;
  std::uint64_t synth_seed = 1;
};

struct ExperimentConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<std::string> models = {"RF", "RST-B", "RST-R", "RST-BB",
                                     "RST-RB"};
  int n_estimators = 100;
  int o_min = 3;
  int o_max = 9;
  int k_min = 11;
  int k_max = 50;
  int min_samples_split = 2;
  std::optional<int> max_depth;
  int rf_mtry = 0;  // 0 = ceil(sqrt(P))
  bool rf_bootstrap = true;
  std::vector<std::uint64_t> seeds = {1};
  std::vector<int> t_grid = {5, 10, 25, 50, 100, 200, 500};
  std::string output_dir = "out";
  int grid_size = 1000;
  int timing_repeats = 3;
  int workers = 1;
};

/// Reads a JSON config file (schema documented in the README); every
/// field is optional and falls back to the defaults above.
ExperimentConfig load_experiment_config(const std::string& path);
void validate_experiment_config(const ExperimentConfig& config);

struct RunRecord {
  std::string dataset;
  std::string model;
  std::uint64_t seed = 0;
  int n_estimators = 0;
  double accuracy = 0.0;
  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
  int theta_o_min = 0, theta_o_max = 0;
  int theta_k_min = 0, theta_k_max = 0;
  int clamp_count = 0;
  std::string error;  // nonempty marks a failed run

  bool ok() const { return error.empty(); }
};

struct TimingRecord {
  std::string dataset;
  std::string model;
  std::uint64_t seed = 0;
  int n_estimators = 0;
  std::vector<double> fit_seconds;  // one per repeat
  double median_seconds = 0.0;
  std::string error;
};

/// The model grid: RST-B/R/BB/RB per the variant mnemonic (B = best
/// split, R = random split, trailing B = bootstrap) plus the raw-value
/// Random Forest baseline.
bool is_rst_model(const std::string& model);
RstEnsemble fit_model(const std::string& model, const Dataset& train,
                      const ExperimentConfig& config, std::uint64_t seed);
std::pair<Dataset, Dataset> load_dataset(const DatasetSpec& spec);

/// Fits and scores every (dataset, model, seed) cell; a failing cell is
/// recorded with an error marker and never aborts the others. Writes
/// records.csv, table.csv (datasets x models pivot of mean accuracy),
/// run.json and paper_reference.csv under config.output_dir.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

/// Accuracy-vs-ensemble-size sweep: trains once at max(t_grid) per
/// (dataset, model, seed) and scores the first-T-member vote at every T.
/// Writes sweep.csv.
std::vector<RunRecord> sweep_estimators(const ExperimentConfig& config);

/// Median-of-repeats wall-clock of fit only (representation building plus
/// tree growth; data loading excluded) at every T in t_grid. Writes
/// timing.csv.
std::vector<TimingRecord> time_fit(const ExperimentConfig& config);

/// Per-observation diversity rows (D, Q_D, V_F) plus one summary row per
/// (dataset, model), for the spline-based models. Writes diversity.csv.
void diversity_report_cmd(const ExperimentConfig& config);

/// Documents where to obtain the UCR archive and the expected file
/// layout (no data ships with the repo).
std::string fetch_info();

double median(std::vector<double> values);

}  // namespace bench
}  // namespace rst
