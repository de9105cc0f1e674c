#include <cstdio>
#include <string>

#include "fpbench/harness.hpp"

namespace fpbench {

namespace {

constexpr double kPlotLeft = 60.0;
constexpr double kPlotTop = 40.0;
constexpr double kPlotHeight = 300.0;
constexpr double kBarWidth = 18.0;
constexpr double kGroupGap = 30.0;
constexpr const char* kSeriesNames[4] = {"Accuracy", "Precision", "Recall", "F1-Score"};
constexpr const char* kSeriesColors[4] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759"};

std::string fmt(double v, int digits = 3) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

std::string render_comparison_svg(const ComparisonSummary& summary) {
  const double group_width = 4 * kBarWidth + kGroupGap;
  const double plot_width = group_width * static_cast<double>(summary.entries.size());
  const double width = kPlotLeft + plot_width + 140.0;
  const double height = kPlotTop + kPlotHeight + 60.0;
  const double baseline = kPlotTop + kPlotHeight;

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) +
         "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\" data-plot-height=\"" + fmt(kPlotHeight) +
         "\" data-baseline=\"" + fmt(baseline) + "\">\n";
  svg += "  <title>Performance comparison</title>\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) + "\" fill=\"#ffffff\"/>\n";

  for (int tick = 0; tick <= 4; ++tick) {
    const double v = tick / 4.0;
    const double y = baseline - v * kPlotHeight;
    svg += "  <line x1=\"" + fmt(kPlotLeft) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(kPlotLeft + plot_width) + "\" y2=\"" +
           fmt(y) + "\" stroke=\"#dddddd\"/>\n";
    svg += "  <text x=\"" + fmt(kPlotLeft - 8) + "\" y=\"" + fmt(y + 4) + "\" font-size=\"11\" text-anchor=\"end\">" +
           fmt(v).substr(0, 4) + "</text>\n";
  }

  for (std::size_t g = 0; g < summary.entries.size(); ++g) {
    const auto& e = summary.entries[g];
    const double values[4] = {e.accuracy, e.precision, e.recall, e.f1};
    const double x0 = kPlotLeft + static_cast<double>(g) * group_width + kGroupGap / 2;
    svg += "  <g class=\"group\" data-label=\"" + xml_escape(e.label) + "\">\n";
    for (int s = 0; s < 4; ++s) {
      const double h = values[s] * kPlotHeight;
      svg += "    <rect class=\"bar\" data-series=\"" + std::string(kSeriesNames[s]) + "\" data-value=\"" + fmt(values[s], 6) +
             "\" x=\"" + fmt(x0 + s * kBarWidth) + "\" y=\"" + fmt(baseline - h) + "\" width=\"" + fmt(kBarWidth) +
             "\" height=\"" + fmt(h) + "\" fill=\"" + kSeriesColors[s] + "\"/>\n";
    }
    svg += "    <text x=\"" + fmt(x0 + 2 * kBarWidth) + "\" y=\"" + fmt(baseline + 18) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + xml_escape(e.label) + "</text>\n";
    svg += "  </g>\n";
  }

  svg += "  <line x1=\"" + fmt(kPlotLeft) + "\" y1=\"" + fmt(baseline) + "\" x2=\"" + fmt(kPlotLeft + plot_width) +
         "\" y2=\"" + fmt(baseline) + "\" stroke=\"#000000\"/>\n";
  for (int s = 0; s < 4; ++s) {
    const double y = kPlotTop + s * 20.0;
    const double x = kPlotLeft + plot_width + 20.0;
    svg += "  <rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"12\" height=\"12\" fill=\"" + kSeriesColors[s] + "\"/>\n";
    svg += "  <text x=\"" + fmt(x + 18) + "\" y=\"" + fmt(y + 10) + "\" font-size=\"12\">" + kSeriesNames[s] + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace fpbench
