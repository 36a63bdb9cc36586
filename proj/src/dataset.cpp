#include "rst/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rst/rng.hpp"

namespace rst {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  char delim = line.find('\t') != std::string::npos ? '\t' : ',';
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, delim)) fields.push_back(field);
  return fields;
}

double parse_value(const std::string& token, std::size_t line_no) {
  std::size_t consumed = 0;
  double value;
  try {
    value = std::stod(token, &consumed);
  } catch (const std::exception&) {
    throw std::runtime_error("load_ucr: unparsable token '" + token +
                             "' on line " + std::to_string(line_no));
  }
  // Allow trailing whitespace only.
  for (std::size_t i = consumed; i < token.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(token[i]))) {
      throw std::runtime_error("load_ucr: unparsable token '" + token +
                               "' on line " + std::to_string(line_no));
    }
  }
  if (!std::isfinite(value)) {
    throw std::runtime_error("load_ucr: non-finite value on line " +
                             std::to_string(line_no));
  }
  return value;
}

bool is_blank(const std::string& line) {
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Dataset load_ucr(const std::string& path, const std::string& name,
                 Split split) {
  std::ifstream file(path);
  if (!file) {
    throw std::runtime_error("load_ucr: cannot open " + path);
  }

  std::vector<double> raw_labels;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t expected_width = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() < 3) {
      throw std::runtime_error("load_ucr: line " + std::to_string(line_no) +
                               " has fewer than 2 series values");
    }
    if (expected_width == 0) {
      expected_width = fields.size();
    } else if (fields.size() != expected_width) {
      throw std::runtime_error(
          "load_ucr: ragged row on line " + std::to_string(line_no) +
          " (expected " + std::to_string(expected_width - 1) +
          " values, got " + std::to_string(fields.size() - 1) + ")");
    }
    raw_labels.push_back(parse_value(fields[0], line_no));
    std::vector<double> row;
    row.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      row.push_back(parse_value(fields[i], line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::runtime_error("load_ucr: no records in " + path);
  }

  Dataset ds;
  ds.name = name.empty() ? path : name;
  ds.split = split;
  for (double value : raw_labels) ds.label_map[value] = 0;
  int next_id = 1;
  for (auto& [value, id] : ds.label_map) id = next_id++;

  ds.series.resize(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(expected_width - 1));
  ds.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ds.labels.push_back(ds.label_map.at(raw_labels[i]));
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      ds.series(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return ds;
}

void save_ucr(const Dataset& ds, const std::string& path) {
  std::ofstream file(path);
  if (!file) {
    throw std::runtime_error("save_ucr: cannot open " + path);
  }
  std::vector<double> originals(static_cast<std::size_t>(ds.num_classes()));
  for (const auto& [value, id] : ds.label_map) {
    originals[static_cast<std::size_t>(id - 1)] = value;
  }
  char buf[64];
  for (int i = 0; i < ds.num_observations(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g",
                  originals[static_cast<std::size_t>(ds.labels[static_cast<std::size_t>(i)] - 1)]);
    file << buf;
    for (int j = 0; j < ds.series_length(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", ds.series(i, j));
      file << '\t' << buf;
    }
    file << '\n';
  }
}

std::pair<Dataset, Dataset> synth_dataset(int n_per_class, int series_length,
                                          double noise_sd,
                                          std::uint64_t seed) {
  if (n_per_class < 1) {
    throw std::invalid_argument("synth_dataset: n_per_class must be >= 1");
  }
  if (series_length < 8) {
    throw std::invalid_argument("synth_dataset: series length must be >= 8");
  }
  constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
  Rng rng(seed);

  auto make = [&](Split split, int count_per_class) {
    Dataset ds;
    ds.name = "synthetic";
    ds.split = split;
    ds.series.resize(2 * count_per_class, series_length);
    return ds;
  };

  int n_train = n_per_class / 2;
  int n_test = n_per_class - n_train;
  Dataset train = make(Split::Train, n_train);
  Dataset test = make(Split::Test, n_test);
  for (Dataset* ds : {&train, &test}) {
    ds->label_map = {{1.0, 1}, {2.0, 2}};
  }

  // Draw order: class 1 first, all of its series in order, then class 2;
  // within a class the first n/2 draws are the train half.
  for (int cls = 1; cls <= 2; ++cls) {
    double freq = cls == 1 ? 1.0 : 2.0;
    for (int i = 0; i < n_per_class; ++i) {
      bool to_train = i < n_train;
      Dataset& ds = to_train ? train : test;
      int row = (cls - 1) * (to_train ? n_train : n_test) +
                (to_train ? i : i - n_train);
      for (int p = 0; p < series_length; ++p) {
        double t = static_cast<double>(p) / (series_length - 1);
        double value = std::sin(kTwoPi * freq * t);
        if (noise_sd > 0.0) value += noise_sd * rng.next_gaussian();
        ds.series(row, p) = value;
      }
      ds.labels.push_back(cls);
    }
  }
  return {std::move(train), std::move(test)};
}

DatasetSummary dataset_summary(const Dataset& ds) {
  DatasetSummary summary;
  summary.name = ds.name;
  summary.num_observations = ds.num_observations();
  summary.series_length = ds.series_length();
  summary.num_classes = ds.num_classes();
  summary.class_histogram.assign(static_cast<std::size_t>(ds.num_classes()), 0);
  for (int label : ds.labels) {
    summary.class_histogram[static_cast<std::size_t>(label - 1)]++;
  }
  summary.single_class = ds.num_classes() == 1;
  return summary;
}

}  // namespace rst
