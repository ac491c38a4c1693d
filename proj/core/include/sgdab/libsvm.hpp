#pragma once

#include <string>

#include <Eigen/Core>

namespace sgdab {

struct Dataset {
  Eigen::MatrixXd features;  // n_data x d, unspecified entries zero
  Eigen::VectorXd labels;    // entries in {-1, +1}
};

// LIBSVM sparse text format: one "label idx:val idx:val ..." line per sample,
// 1-based indices.  Labels 0/1 are mapped to -1/+1; the feature count is the
// maximum index seen.  Malformed lines raise ParseError with the line number.
Dataset load_libsvm(const std::string& path);

// Inverse of load_libsvm for round-trip tests; zero entries are skipped.
void write_libsvm(const Dataset& data, const std::string& path);

// Per-row min-max normalization: each row is shifted by its own minimum and
// scaled by its own range.  Constant rows map to all-zeros.
Eigen::MatrixXd normalize_minmax(const Eigen::MatrixXd& features);

}  // namespace sgdab
