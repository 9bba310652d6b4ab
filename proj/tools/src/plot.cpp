#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fxtcore/errors.hpp"

namespace fxt::plot {

namespace {

constexpr int kWidth = 760;
constexpr int kHeight = 480;
constexpr int kMarginL = 70;
constexpr int kMarginR = 160;
constexpr int kMarginT = 40;
constexpr int kMarginB = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
                          "#bcbd22", "#e377c2", "#393b79", "#637939"};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label) {
  if (series.empty()) throw ConfigError("render_svg: no series");
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmin < xmax)) xmax = xmin + 1.0;
  if (!(ymin < ymax)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double pw = kWidth - kMarginL - kMarginR;
  const double ph = kHeight - kMarginT - kMarginB;
  auto px = [&](double x) { return kMarginL + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kMarginT + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // Axes box and ticks.
  svg << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double yv = ymin + (ymax - ymin) * i / 5.0;
    svg << "<line x1=\"" << px(xv) << "\" y1=\"" << kMarginT + ph << "\" x2=\""
        << px(xv) << "\" y2=\"" << kMarginT + ph + 5 << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << px(xv) << "\" y=\"" << kMarginT + ph + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << fmt(xv) << "</text>\n"
        << "<line x1=\"" << kMarginL - 5 << "\" y1=\"" << py(yv) << "\" x2=\""
        << kMarginL << "\" y2=\"" << py(yv) << "\" stroke=\"#333\"/>\n"
        << "<text x=\"" << kMarginL - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(yv) << "</text>\n";
  }
  svg << "<text x=\"" << kMarginL + pw / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_label << "</text>\n"
      << "<text x=\"18\" y=\"" << kMarginT + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << kMarginT + ph / 2 << ")\">" << y_label
      << "</text>\n";

  // Zero line when the range straddles it.
  if (ymin < 0.0 && ymax > 0.0)
    svg << "<line x1=\"" << kMarginL << "\" y1=\"" << py(0.0) << "\" x2=\""
        << kMarginL + pw << "\" y2=\"" << py(0.0)
        << "\" stroke=\"#aaa\" stroke-dasharray=\"4 3\"/>\n";

  const int ncolors = static_cast<int>(sizeof(kPalette) / sizeof(kPalette[0]));
  for (size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % ncolors];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : series[k].points)
      if (std::isfinite(x) && std::isfinite(y))
        svg << px(x) << "," << py(y) << " ";
    svg << "\"/>\n";
    const double ly = kMarginT + 16.0 * (k + 1);
    svg << "<line x1=\"" << kWidth - kMarginR + 10 << "\" y1=\"" << ly
        << "\" x2=\"" << kWidth - kMarginR + 34 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kWidth - kMarginR + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[k].label
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<Series> series_for_kind(const SimulationTrace& trace,
                                    const std::string& kind) {
  if (trace.rows.empty()) throw ConfigError("plot: empty trace");
  const auto& rows = trace.rows;
  std::vector<Series> out;

  auto column = [&](const std::string& label, auto getter) {
    Series s;
    s.label = label;
    s.points.reserve(rows.size());
    for (const auto& r : rows) s.points.emplace_back(r.t, getter(r));
    out.push_back(std::move(s));
  };

  if (kind == "xy") {
    if (rows.front().x.size() < 2) throw ConfigError("plot: xy needs 2 states");
    Series s;
    s.label = "trajectory";
    for (const auto& r : rows) s.points.emplace_back(r.x(0), r.x(1));
    out.push_back(std::move(s));
  } else if (kind == "states") {
    for (int i = 0; i < rows.front().x.size(); ++i)
      column("x" + std::to_string(i), [i](const TraceRow& r) { return r.x(i); });
  } else if (kind == "controls") {
    for (int i = 0; i < rows.front().u.size(); ++i)
      column("u" + std::to_string(i), [i](const TraceRow& r) { return r.u(i); });
  } else if (kind == "cbf") {
    for (size_t i = 0; i < rows.front().h.size(); ++i) {
      const std::string name =
          i < trace.h_names.size() ? trace.h_names[i] : std::to_string(i);
      column("h_" + name, [i](const TraceRow& r) { return r.h[i]; });
      column("hr_" + name, [i](const TraceRow& r) { return r.h_r[i]; });
    }
    if (out.empty()) throw ConfigError("plot: trace has no barrier columns");
  } else if (kind == "theta") {
    for (int i = 0; i < rows.front().theta_hat.size(); ++i)
      column("theta_hat" + std::to_string(i),
             [i](const TraceRow& r) { return r.theta_hat(i); });
  } else if (kind == "eta") {
    column("eta", [](const TraceRow& r) { return r.eta; });
    column("theta_R_inf", [](const TraceRow& r) { return r.oracle_theta_R_inf; });
  } else {
    throw ConfigError("plot: unknown kind '" + kind + "'");
  }
  return out;
}

}  // namespace fxt::plot
