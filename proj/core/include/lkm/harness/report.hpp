#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lkm/algorithms.hpp"

namespace lkm::harness {

inline constexpr const char* kTraceHeader = "iter,p,d,gap,memory_size,active_size,inner_iterations,cum_time_ms";

void write_trace_csv(std::ostream& out, const RunResult& r);
void write_trace_csv(const std::string& path, const RunResult& r);

/// {status, final_p, final_d, iterations, total_ms}
std::string summary_json(const RunResult& r);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "iteration";
  std::string y_label;
  bool log_y = false;  // plot log10(y); non-positive values are dropped
  bool steps = false;  // step curve instead of polyline
};

std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series);

enum class Metric { Gap, Memory, Time };
Series trace_series(const RunResult& r, Metric m, std::string label);

/// Gap on a log scale above a memory step curve, for a single run.
std::string solve_plot(const RunResult& r);

void write_text(const std::string& path, const std::string& text);

}  // namespace lkm::harness
