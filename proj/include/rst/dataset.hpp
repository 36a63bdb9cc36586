#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rst {

enum class Split { Train, Test };

/// Fixed-length labeled time series. Labels are remapped to contiguous
/// class ids 1..Z in ascending order of the original label values;
/// label_map records the original value for each class id.
struct Dataset {
  std::string name;
  Split split = Split::Train;
  Eigen::MatrixXd series;             // N x P
  std::vector<int> labels;            // N entries in 1..Z
  std::map<double, int> label_map;    // original label -> class id

  int num_observations() const { return static_cast<int>(series.rows()); }
  int series_length() const { return static_cast<int>(series.cols()); }
  int num_classes() const { return static_cast<int>(label_map.size()); }
};

struct DatasetSummary {
  std::string name;
  int num_observations = 0;
  int series_length = 0;
  int num_classes = 0;
  std::vector<int> class_histogram;  // indexed by class id - 1
  bool single_class = false;
};

/// Loads a UCR-style text file: one record per line, label first, then P
/// values, tab- or comma-delimited; blank lines are skipped. Rejects
/// ragged rows (reporting the line number), unparsable tokens, and
/// non-finite values.
Dataset load_ucr(const std::string& path, const std::string& name = "",
                 Split split = Split::Train);

/// Writes a dataset back in the UCR text form (tab-delimited, original
/// label values, 17 significant digits).
void save_ucr(const Dataset& ds, const std::string& path);

/// Seeded two-class synthetic suite: class 1 = sin(2*pi*t) + noise,
/// class 2 = sin(4*pi*t) + noise on the uniform grid t_p = (p-1)/(P-1).
/// Per class, the first half of the draws goes to train and the second
/// half to test. Requires n_per_class >= 1 (even for equal halves) and
/// P >= 8.
std::pair<Dataset, Dataset> synth_dataset(int n_per_class, int series_length,
                                          double noise_sd, std::uint64_t seed);

DatasetSummary dataset_summary(const Dataset& ds);

}  // namespace rst
