#include "lkm/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "lkm/errors.hpp"

namespace lkm::harness {

void write_trace_csv(std::ostream& out, const RunResult& r) {
  out << kTraceHeader << '\n';
  out << std::setprecision(17);
  for (const IterationRecord& rec : r.trace) {
    out << rec.iter << ',' << rec.p << ',' << rec.d << ',' << rec.gap << ',' << rec.memory_size << ','
        << rec.active_size << ',' << rec.inner_iterations << ',' << rec.cum_time_ms << '\n';
  }
}

void write_trace_csv(const std::string& path, const RunResult& r) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  write_trace_csv(out, r);
}

std::string summary_json(const RunResult& r) {
  nlohmann::json j;
  j["status"] = std::string(status_name(r.status));
  j["method"] = std::string(method_name(r.method));
  j["iterations"] = r.iterations();
  if (r.trace.empty()) {
    j["final_p"] = nullptr;
    j["final_d"] = nullptr;
    j["total_ms"] = 0.0;
  } else {
    j["final_p"] = r.trace.back().p;
    j["final_d"] = r.trace.back().d;
    j["total_ms"] = r.trace.back().cum_time_ms;
  }
  if (!r.message.empty()) j["message"] = r.message;
  return j.dump(2);
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

std::string escape(const std::string& in) {
  std::string out;
  for (char c : in) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series) {
  constexpr double W = 640, H = 400, L = 70, R = 150, T = 36, B = 48;
  const double pw = W - L - R, ph = H - T - B;

  std::vector<std::vector<std::pair<double, double>>> pts(series.size());
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const std::size_t m = std::min(series[s].x.size(), series[s].y.size());
    for (std::size_t i = 0; i < m; ++i) {
      double y = series[s].y[i];
      if (spec.log_y) {
        if (!(y > 0.0)) continue;
        y = std::log10(y);
      }
      if (!std::isfinite(y) || !std::isfinite(series[s].x[i])) continue;
      pts[s].emplace_back(series[s].x[i], y);
      xmin = std::min(xmin, series[s].x[i]);
      xmax = std::max(xmax, series[s].x[i]);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return T + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream o;
  o << std::fixed << std::setprecision(2);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(spec.title)
    << "</text>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = xmin + (xmax - xmin) * k / 4.0;
    const double fy = ymin + (ymax - ymin) * k / 4.0;
    o << "<line x1=\"" << sx(fx) << "\" y1=\"" << T + ph << "\" x2=\"" << sx(fx) << "\" y2=\"" << T + ph + 4
      << "\" stroke=\"#444\"/>\n";
    o << "<text x=\"" << sx(fx) << "\" y=\"" << T + ph + 17 << "\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << sy(fy) << "\" x2=\"" << L + pw << "\" y2=\"" << sy(fy)
      << "\" stroke=\"#ddd\"/>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << sy(fy) + 4 << "\" text-anchor=\"end\">"
      << (spec.log_y ? "1e" + fmt(fy) : fmt(fy)) << "</text>\n";
  }
  o << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << escape(spec.x_label)
    << "</text>\n";
  o << "<text transform=\"translate(16," << T + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(spec.log_y ? "log10 " + spec.y_label : spec.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    if (!pts[s].empty()) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < pts[s].size(); ++i) {
        if (spec.steps && i > 0) o << sx(pts[s][i].first) << ',' << sy(pts[s][i - 1].second) << ' ';
        o << sx(pts[s][i].first) << ',' << sy(pts[s][i].second) << ' ';
      }
      o << "\"/>\n";
    }
    const double ly = T + 14 + 18.0 * static_cast<double>(s);
    o << "<line x1=\"" << L + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 30 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << L + pw + 35 << "\" y=\"" << ly + 4 << "\">" << escape(series[s].label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

Series trace_series(const RunResult& r, Metric m, std::string label) {
  Series s;
  s.label = std::move(label);
  for (const IterationRecord& rec : r.trace) {
    s.x.push_back(rec.iter);
    switch (m) {
      case Metric::Gap: s.y.push_back(rec.gap); break;
      case Metric::Memory: s.y.push_back(rec.memory_size); break;
      case Metric::Time: s.y.push_back(rec.cum_time_ms); break;
    }
  }
  return s;
}

std::string solve_plot(const RunResult& r) {
  const std::string name(method_name(r.method));
  std::string gap = render_svg({name + ": gap", "iteration", "gap", true, false}, {trace_series(r, Metric::Gap, name)});
  std::string mem =
      render_svg({name + ": memory", "iteration", "|V|", false, true}, {trace_series(r, Metric::Memory, name)});
  // Stack the two panels in one document.
  auto body = [](const std::string& svg) {
    const auto open = svg.find('>', svg.find("<svg")) + 1;
    const auto close = svg.rfind("</svg>");
    return svg.substr(open, close - open);
  };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"800\" viewBox=\"0 0 640 800\">\n"
    << "<g>" << body(gap) << "</g>\n<g transform=\"translate(0,400)\">" << body(mem) << "</g>\n</svg>\n";
  return o.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

}  // namespace lkm::harness
