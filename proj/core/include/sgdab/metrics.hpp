#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace sgdab {

// One trace row.  NaN marks an unavailable metric and is written as an empty
// CSV cell.
struct MetricRow {
  std::string method;
  std::uint64_t seed = 0;
  double oracle_calls = 0.0;
  std::int64_t iteration = 0;
  double grad_norm_sq = std::numeric_limits<double>::quiet_NaN();
  double map_norm = std::numeric_limits<double>::quiet_NaN();
  double primal_value = std::numeric_limits<double>::quiet_NaN();
  double train_error = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = std::numeric_limits<double>::quiet_NaN();
};

struct MetricTrace {
  std::vector<MetricRow> rows;

  void append(const MetricTrace& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  }
};

// CSV with header
//   method,seed,oracle_calls,iter,grad_norm_sq,map_norm,primal_value,train_error,wall_ms
// UTF-8, LF line endings, doubles at 17 significant digits.
void write_csv(const MetricTrace& trace, const std::string& path);
MetricTrace parse_csv(const std::string& path);

// gnuplot script with one curve per CSV path, log-scale y, legend from the
// file basenames.  The script is text output only; nothing executes it here.
void emit_plot_script(const std::vector<std::string>& csv_paths,
                      const std::string& out_path,
                      const std::string& ylabel = "metric");

// First oracle-call count at which the metric column is <= threshold;
// +infinity when never reached.  Rows must belong to a single (method, seed)
// series ordered by calls.
double threshold_crossing(const std::vector<MetricRow>& rows,
                          double threshold, bool use_grad_norm_sq = true);

double median(std::vector<double> values);

}  // namespace sgdab
