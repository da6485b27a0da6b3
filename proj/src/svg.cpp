#include "vmra/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace vmra::svg {

namespace {

constexpr double kPanelWidth = 480.0;
constexpr double kPanelHeight = 360.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 120.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 48.0;
constexpr int kTicks = 5;

constexpr std::array<const char*, 6> kPalette{
	"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& text)
{
	std::string out;
	for (char ch : text) {
		switch (ch) {
		case '&': out += "&amp;"; break;
		case '<': out += "&lt;"; break;
		case '>': out += "&gt;"; break;
		case '"': out += "&quot;"; break;
		default: out += ch;
		}
	}
	return out;
}

std::string number(double v)
{
	return fmt::format("{:.2f}", v);
}

std::string tick_label(double v)
{
	if (std::fabs(v - std::round(v)) < 1e-9) {
		return fmt::format("{}", static_cast<long long>(std::round(v)));
	}
	return fmt::format("{:.3g}", v);
}

void render_panel(std::string& out, const Chart& chart, double x0)
{
	double xmin = std::numeric_limits<double>::infinity();
	double xmax = -xmin;
	double ymax = 0.0;
	for (const auto& s : chart.series) {
		for (const auto& [x, y] : s.points) {
			if (!std::isfinite(x) || !std::isfinite(y)) {
				continue;
			}
			xmin = std::min(xmin, x);
			xmax = std::max(xmax, x);
			ymax = std::max(ymax, y);
		}
	}
	if (!std::isfinite(xmin)) {
		xmin = 0.0;
		xmax = 1.0;
	}
	if (xmax <= xmin) {
		xmax = xmin + 1.0;
	}
	if (ymax <= 0.0) {
		ymax = 1.0;
	}
	ymax *= 1.1;

	const double left = x0 + kMarginLeft;
	const double right = x0 + kPanelWidth - kMarginRight;
	const double top = kMarginTop;
	const double bottom = kPanelHeight - kMarginBottom;
	const auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
	const auto py = [&](double y) { return bottom - y / ymax * (bottom - top); };

	out += fmt::format("<text x=\"{}\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
		number((left + right) / 2), escape(chart.title));
	out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#000\"/>\n",
		number(left), number(bottom), number(right));
	out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#000\"/>\n",
		number(left), number(bottom), number(top));
	for (int t = 0; t <= kTicks; ++t) {
		const double yv = ymax * t / kTicks;
		out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">{}</text>\n",
			number(left - 6), number(py(yv) + 3), tick_label(yv));
		const double xv = xmin + (xmax - xmin) * t / kTicks;
		out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
			number(px(xv)), number(bottom + 14), tick_label(xv));
	}
	out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
		number((left + right) / 2), number(kPanelHeight - 12), escape(chart.x_label));
	out += fmt::format("<text x=\"{0}\" y=\"{1}\" font-size=\"12\" text-anchor=\"middle\" "
	                   "transform=\"rotate(-90 {0} {1})\">{2}</text>\n",
		number(x0 + 16), number((top + bottom) / 2), escape(chart.y_label));

	for (std::size_t k = 0; k < chart.series.size(); ++k) {
		const auto& s = chart.series[k];
		const char* color = kPalette[k % kPalette.size()];
		std::string path;
		for (const auto& [x, y] : s.points) {
			if (!std::isfinite(x) || !std::isfinite(y)) {
				continue;
			}
			path += fmt::format("{}{},{}", path.empty() ? "" : " ", number(px(x)), number(py(y)));
		}
		out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color, path);
		for (const auto& [x, y] : s.points) {
			if (std::isfinite(x) && std::isfinite(y)) {
				out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n",
					number(px(x)), number(py(y)), color);
			}
		}
		const double ly = top + 14.0 * static_cast<double>(k);
		out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
			number(right + 10), number(ly), number(right + 28), color);
		out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n",
			number(right + 32), number(ly + 4), escape(s.name));
	}
}

} // namespace

std::string render(const std::vector<Chart>& panels)
{
	const double width = kPanelWidth * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
	std::string out = fmt::format(
		"<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
		"font-family=\"sans-serif\">\n",
		number(width), number(kPanelHeight));
	out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"#fff\"/>\n", number(width), number(kPanelHeight));
	for (std::size_t i = 0; i < panels.size(); ++i) {
		render_panel(out, panels[i], kPanelWidth * static_cast<double>(i));
	}
	out += "</svg>\n";
	return out;
}

} // namespace vmra::svg
