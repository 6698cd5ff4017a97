#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "rlve/cli.hpp"

namespace rlve {

namespace {

constexpr double kWidth = 720;
constexpr double kPanelHeight = 260;
constexpr double kMargin = 50;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                          "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Panel {
  double top;
  double y_max;
  double x_max;

  double x(double step) const { return kMargin + (kWidth - 2 * kMargin) * (x_max > 0 ? step / x_max : 0); }
  double y(double value) const {
    return top + kPanelHeight - kMargin / 2 - (kPanelHeight - kMargin) * (y_max > 0 ? value / y_max : 0);
  }
};

void axes(std::ostringstream& svg, const Panel& p, const std::string& title) {
  svg << "<line x1=\"" << num(p.x(0)) << "\" y1=\"" << num(p.y(0)) << "\" x2=\"" << num(p.x(p.x_max)) << "\" y2=\""
      << num(p.y(0)) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << num(p.x(0)) << "\" y1=\"" << num(p.y(0)) << "\" x2=\"" << num(p.x(0)) << "\" y2=\""
      << num(p.y(p.y_max)) << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << num(kMargin) << "\" y=\"" << num(p.top + 16) << "\" font-size=\"13\">" << title
      << "</text>\n";
  svg << "<text x=\"" << num(kMargin - 6) << "\" y=\"" << num(p.y(p.y_max) + 4)
      << "\" font-size=\"10\" text-anchor=\"end\">" << num(p.y_max) << "</text>\n";
  svg << "<text x=\"" << num(kMargin - 6) << "\" y=\"" << num(p.y(0) + 4) << "\" font-size=\"10\" text-anchor=\"end\">0</text>\n";
  svg << "<text x=\"" << num(p.x(p.x_max)) << "\" y=\"" << num(p.y(0) + 14)
      << "\" font-size=\"10\" text-anchor=\"end\">step " << num(p.x_max) << "</text>\n";
}

void polyline(std::ostringstream& svg, const Panel& p, const std::vector<std::pair<double, double>>& points,
              const char* colour) {
  if (points.empty()) return;
  svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
  for (const auto& [sx, sy] : points) svg << num(p.x(sx)) << "," << num(p.y(sy)) << " ";
  svg << "\"/>\n";
}

}  // namespace

std::string render_metrics_svg(const std::vector<Json>& metrics) {
  std::vector<std::pair<double, double>> ratio;
  std::map<std::string, std::vector<std::pair<double, double>>> frontier;
  double max_step = 0;
  double max_high = 1;
  for (const auto& m : metrics) {
    const double step = m.value("step", 0.0);
    max_step = std::max(max_step, step);
    ratio.emplace_back(step, m.value("effective_prompt_ratio", 0.0));
    if (m.contains("per_env_high") && m.at("per_env_high").is_object()) {
      for (auto it = m.at("per_env_high").begin(); it != m.at("per_env_high").end(); ++it) {
        const double h = it.value().get<double>();
        frontier[it.key()].emplace_back(step, h);
        max_high = std::max(max_high, h);
      }
    }
  }

  const double height = frontier.empty() ? kPanelHeight : 2 * kPanelHeight;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(height)
      << "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const Panel top{0, 1.0, max_step};
  axes(svg, top, "effective prompt ratio");
  polyline(svg, top, ratio, kPalette[0]);

  if (!frontier.empty()) {
    const Panel bottom{kPanelHeight, max_high, max_step};
    axes(svg, bottom, "frontier difficulty (high)");
    std::size_t i = 0;
    for (const auto& [id, points] : frontier) {
      const char* colour = kPalette[i % std::size(kPalette)];
      polyline(svg, bottom, points, colour);
      svg << "<text x=\"" << num(kWidth - kMargin + 4) << "\" y=\"" << num(kPanelHeight + 30 + 12.0 * i)
          << "\" font-size=\"9\" fill=\"" << colour << "\">" << id << "</text>\n";
      ++i;
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace rlve
