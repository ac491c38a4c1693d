#include "sgdab/libsvm.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "sgdab/errors.hpp"

namespace sgdab {

Dataset load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("load_libsvm: cannot open " + path, 0);

  struct Row {
    double label;
    std::vector<std::pair<long, double>> entries;
  };
  std::vector<Row> rows;
  long max_index = 0;
  bool saw_zero_label = false;

  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;  // blank line
    Row row;
    try {
      size_t used = 0;
      row.label = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError(
          "load_libsvm: bad label '" + tok + "' at line " +
              std::to_string(line_no),
          line_no);
    }
    if (row.label == 0.0) saw_zero_label = true;
    while (ss >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw ParseError("load_libsvm: expected idx:val, got '" + tok +
                             "' at line " + std::to_string(line_no),
                         line_no);
      long idx = 0;
      double val = 0.0;
      try {
        idx = std::stol(tok.substr(0, colon));
        val = std::stod(tok.substr(colon + 1));
      } catch (const std::exception&) {
        throw ParseError("load_libsvm: bad entry '" + tok + "' at line " +
                             std::to_string(line_no),
                         line_no);
      }
      if (idx < 1)
        throw ParseError("load_libsvm: index must be >= 1 at line " +
                             std::to_string(line_no),
                         line_no);
      max_index = std::max(max_index, idx);
      row.entries.emplace_back(idx, val);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw ParseError("load_libsvm: empty file " + path, line_no);

  Dataset data;
  data.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                        std::max(max_index, 1L));
  data.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    double lab = row.label;
    if (saw_zero_label) lab = (lab == 0.0) ? -1.0 : 1.0;
    data.labels[static_cast<Eigen::Index>(r)] = (lab > 0.0) ? 1.0 : -1.0;
    for (const auto& [idx, val] : row.entries)
      data.features(static_cast<Eigen::Index>(r), idx - 1) = val;
  }
  return data;
}

void write_libsvm(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("write_libsvm: cannot open " + path, 0);
  char buf[64];
  for (Eigen::Index r = 0; r < data.features.rows(); ++r) {
    out << (data.labels[r] > 0 ? "+1" : "-1");
    for (Eigen::Index c = 0; c < data.features.cols(); ++c) {
      double v = data.features(r, c);
      if (v != 0.0) {
        std::snprintf(buf, sizeof buf, " %ld:%.17g", static_cast<long>(c + 1),
                      v);
        out << buf;
      }
    }
    out << '\n';
  }
}

Eigen::MatrixXd normalize_minmax(const Eigen::MatrixXd& features) {
  Eigen::MatrixXd out = features;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    double lo = out.row(r).minCoeff();
    double hi = out.row(r).maxCoeff();
    if (hi > lo) {
      out.row(r) = (out.row(r).array() - lo) / (hi - lo);
    } else {
      out.row(r).setZero();
    }
  }
  return out;
}

}  // namespace sgdab
