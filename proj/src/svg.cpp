#include "gaw/svg.hpp"

#include <cstdio>
#include <string>

#include "gaw/geometry.hpp"

namespace gaw {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s = buf;
    if (s == "-0.000") s = "0.000";
    return s;
}

}  // namespace

std::string render_svg(const Drawing& d) {
    // SVG's y axis points down; flip so drawings read the same as their coordinates.
    const double h = d.canvas.height;
    auto X = [](double x) { return num(x); };
    auto Y = [h](double y) { return num(h - y); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(d.canvas.width) + "\" height=\"" + num(h) +
           "\" viewBox=\"0 0 " + num(d.canvas.width) + " " + num(h) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + num(d.canvas.width) + "\" height=\"" + num(h) + "\" fill=\"white\"/>\n";
    out += "<g fill=\"none\" stroke=\"black\" stroke-width=\"" + num(d.stroke_width) + "\" stroke-linecap=\"round\">\n";
    for (std::size_t i = 0; i < d.graph.edges.size(); ++i) {
        const auto c = geometry::edge_curve(d, i);
        out += "<path d=\"M " + X(c.from.x) + " " + Y(c.from.y) + " Q " + X(c.control.x) + " " + Y(c.control.y) +
               " " + X(c.to.x) + " " + Y(c.to.y) + "\"/>\n";
    }
    out += "</g>\n<g fill=\"black\">\n";
    for (const Point p : d.positions) {
        out += "<circle cx=\"" + X(p.x) + "\" cy=\"" + Y(p.y) + "\" r=\"" + num(d.node_radius) + "\"/>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace gaw
