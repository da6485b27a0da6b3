#ifndef VMRA_SVG_HPP
#define VMRA_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace vmra::svg {

struct Series
{
	std::string name;
	std::vector<std::pair<double, double>> points;
};

struct Chart
{
	std::string title;
	std::string x_label;
	std::string y_label;
	std::vector<Series> series;
};

/// Self-contained SVG with the charts laid out left to right.
std::string render(const std::vector<Chart>& panels);

} // namespace vmra::svg

#endif // VMRA_SVG_HPP
