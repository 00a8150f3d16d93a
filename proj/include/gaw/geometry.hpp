#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gaw/model.hpp"

namespace gaw::geometry {

/// Maximum Hausdorff distance between a curved edge and its polyline.
inline constexpr double kFlatTolerance = 0.25;
/// Intersections closer than this to an edge endpoint are contacts, not crossings.
inline constexpr double kSnapEpsilon = 1e-6;
/// Grid used to merge arrangement vertices.
inline constexpr double kSnapGrid = 1e-7;
/// Reflex turns up to this many degrees still count as convex.
inline constexpr double kConvexToleranceDeg = 1.0;

double dot(Point a, Point b);
double cross(Point a, Point b);
double norm(Point a);
double distance(Point a, Point b);
double point_segment_distance(Point p, Point a, Point b);

struct Polyline {
    std::vector<Point> points;

    double length() const;
    std::size_t segment_count() const { return points.empty() ? 0 : points.size() - 1; }
};

double point_polyline_distance(Point p, const Polyline& line);

/// Shoelace area, positive for counter-clockwise rings (y up).
double signed_area(std::span<const Point> ring);

/// Quadratic Bezier of one edge, oriented from edge.u to edge.v.
struct EdgeCurve {
    Point from;
    Point control;
    Point to;

    Point at(double t) const;
};

/// Throws gaw::Error(degenerate_geometry) when the endpoints coincide.
EdgeCurve edge_curve(const Drawing& d, std::size_t edge_index);

/// Uniform-parameter flattening; straight edges give exactly two points.
Polyline flatten_edge(const Drawing& d, std::size_t edge_index, double tolerance = kFlatTolerance);
std::vector<Polyline> flatten_edges(const Drawing& d, double tolerance = kFlatTolerance);

struct Crossing {
    std::size_t edge_a = 0;  // edge_a < edge_b
    std::size_t edge_b = 0;
    Point point;
    double angle = 0.0;  // acute, degrees in (0, 90]
};

/// One entry per transversal intersection point of two non-adjacent edges.
/// Curved edges that intersect several times yield several entries.
std::vector<Crossing> find_crossings(const Drawing& d);
std::vector<Crossing> find_crossings(const Drawing& d, std::span<const Polyline> edges);

struct Face {
    /// Closed ring (last point connects back to the first); counter-clockwise
    /// for bounded faces.
    Polyline boundary;
    /// Infinity for the unbounded face. Holes are subtracted.
    double area = 0.0;
    bool bounded = false;
    bool convex = false;
};

/// Faces of the planar arrangement of all flattened edges. Exactly one face is
/// unbounded; it is always the last element.
std::vector<Face> compute_faces(const Drawing& d);
std::vector<Face> compute_faces(std::span<const Polyline> edges);

/// Tangent direction (radians, atan2 convention) of every incident edge as it
/// leaves `node`, in edge order.
std::vector<double> incident_directions(const Drawing& d, NodeId node);

/// Angles in degrees between circularly adjacent incident tangents, starting
/// from the smallest direction. Empty optional when degree < 2.
std::optional<std::vector<double>> incident_angles(const Drawing& d, NodeId node);

}  // namespace gaw::geometry
