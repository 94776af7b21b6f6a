#pragma once

#include <utility>
#include <vector>

namespace dbc {

using Point2 = std::pair<double, double>;

// Monotone-chain hulls of a 2-D point cloud. Input need not be sorted;
// duplicates are fine. Output vertices are ordered by x.
std::vector<Point2> lower_hull(std::vector<Point2> pts);
std::vector<Point2> upper_hull(std::vector<Point2> pts);

// Piecewise-linear evaluation along a hull; clamps x to the vertex range.
double hull_interpolate(const std::vector<Point2>& hull, double x);

} // namespace dbc
