#include "sgdab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sgdab/errors.hpp"

namespace sgdab {

namespace {

const char* kHeader =
    "method,seed,oracle_calls,iter,grad_norm_sq,map_norm,primal_value,"
    "train_error,wall_ms";

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_cell(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

}  // namespace

void write_csv(const MetricTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << kHeader << '\n';
  for (const MetricRow& r : trace.rows) {
    out << r.method << ',' << r.seed << ',' << fmt(r.oracle_calls) << ','
        << r.iteration << ',' << fmt(r.grad_norm_sq) << ',' << fmt(r.map_norm)
        << ',' << fmt(r.primal_value) << ',' << fmt(r.train_error) << ','
        << fmt(r.wall_ms) << '\n';
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

MetricTrace parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("parse_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("parse_csv: empty file " + path, 0);
  if (line != kHeader)
    throw ParseError("parse_csv: unexpected header in " + path, 1);

  MetricTrace trace;
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    while (cells.size() < 9) cells.emplace_back();
    if (cells.size() != 9)
      throw ParseError("parse_csv: expected 9 cells at line " +
                           std::to_string(line_no),
                       line_no);
    MetricRow r;
    r.method = cells[0];
    r.seed = static_cast<std::uint64_t>(std::stoull(cells[1]));
    r.oracle_calls = parse_cell(cells[2]);
    r.iteration = std::stoll(cells[3]);
    r.grad_norm_sq = parse_cell(cells[4]);
    r.map_norm = parse_cell(cells[5]);
    r.primal_value = parse_cell(cells[6]);
    r.train_error = parse_cell(cells[7]);
    r.wall_ms = parse_cell(cells[8]);
    trace.rows.push_back(std::move(r));
  }
  return trace;
}

void emit_plot_script(const std::vector<std::string>& csv_paths,
                      const std::string& out_path, const std::string& ylabel) {
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_plot_script: cannot open " + out_path);
  out << "# gnuplot script; render with: gnuplot -persist " << out_path
      << "\n";
  out << "set datafile separator ','\n";
  out << "set logscale y\n";
  out << "set xlabel 'oracle calls'\n";
  out << "set ylabel '" << ylabel << "'\n";
  out << "set key top right\n";
  out << "plot \\\n";
  for (size_t i = 0; i < csv_paths.size(); ++i) {
    std::string base = csv_paths[i];
    auto slash = base.find_last_of('/');
    if (slash != std::string::npos) base = base.substr(slash + 1);
    std::string title = base;
    auto dot = title.find_last_of('.');
    if (dot != std::string::npos) title = title.substr(0, dot);
    out << "  '" << base << "' using 3:5 skip 1 with lines title '" << title
        << "'";
    out << (i + 1 < csv_paths.size() ? ", \\\n" : "\n");
  }
  if (!out)
    throw std::runtime_error("emit_plot_script: write failed for " + out_path);
}

double threshold_crossing(const std::vector<MetricRow>& rows, double threshold,
                          bool use_grad_norm_sq) {
  for (const MetricRow& r : rows) {
    double v = use_grad_norm_sq ? r.grad_norm_sq : r.map_norm;
    if (!std::isnan(v) && v <= threshold) return r.oracle_calls;
  }
  return std::numeric_limits<double>::infinity();
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace sgdab
