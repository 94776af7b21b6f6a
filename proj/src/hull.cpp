#include "dbc/hull.hpp"

#include <algorithm>
#include <stdexcept>

namespace dbc {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
}

std::vector<Point2> chain(std::vector<Point2> pts, bool lower) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<Point2> h;
    for (const auto& p : pts) {
        while (h.size() >= 2) {
            double c = cross(h[h.size() - 2], h.back(), p);
            if (lower ? c <= 0.0 : c >= 0.0)
                h.pop_back();
            else
                break;
        }
        h.push_back(p);
    }
    return h;
}

} // namespace

std::vector<Point2> lower_hull(std::vector<Point2> pts) { return chain(std::move(pts), true); }
std::vector<Point2> upper_hull(std::vector<Point2> pts) { return chain(std::move(pts), false); }

double hull_interpolate(const std::vector<Point2>& hull, double x) {
    if (hull.empty()) throw std::invalid_argument("hull_interpolate: empty hull");
    if (x <= hull.front().first) return hull.front().second;
    if (x >= hull.back().first) return hull.back().second;
    auto it = std::lower_bound(hull.begin(), hull.end(), Point2{x, -1e300});
    const Point2& b = *it;
    const Point2& a = *(it - 1);
    if (b.first - a.first < 1e-300) return std::min(a.second, b.second);
    double t = (x - a.first) / (b.first - a.first);
    return a.second + t * (b.second - a.second);
}

} // namespace dbc
