#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace cartogrammer {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }

inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }

struct BBox {
  double xmin = std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  void extend(Point p) {
    xmin = std::min(xmin, p.x);
    ymin = std::min(ymin, p.y);
    xmax = std::max(xmax, p.x);
    ymax = std::max(ymax, p.y);
  }
  bool empty() const { return xmin > xmax || ymin > ymax; }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return empty() ? 0.0 : width() * height(); }
  double diagonal() const { return empty() ? 0.0 : std::hypot(width(), height()); }
  Point center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

inline BBox bbox_of(std::span<const Point> points) {
  BBox box;
  for (const Point& p : points) box.extend(p);
  return box;
}

// A ring is an open cycle of indices into a vertex pool; the closing edge
// from the last vertex back to the first is implicit.
using Ring = std::vector<std::size_t>;

// Signed shoelace area of a ring, positive when counterclockwise. Products
// are taken relative to the first vertex so the result does not depend on
// where the ring sits in the plane.
inline double signed_area(const Ring& ring, std::span<const Point> pool) {
  if (ring.size() < 3) return 0.0;
  const Point origin = pool[ring.front()];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
    twice += cross(pool[ring[i]] - origin, pool[ring[i + 1]] - origin);
  }
  return 0.5 * twice;
}

// First moment of a ring about the origin, returned together with its signed
// area: centroid = moment / area. Computed about the ring's first vertex and
// shifted back, for the same reason as signed_area.
struct RingMoment {
  double area = 0.0;
  Point moment;
};

inline RingMoment ring_moment(const Ring& ring, std::span<const Point> pool) {
  RingMoment out;
  if (ring.size() < 3) return out;
  const Point origin = pool[ring.front()];
  double twice_area = 0.0;
  Point sum;
  for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
    const Point a = pool[ring[i]] - origin;
    const Point b = pool[ring[i + 1]] - origin;
    const double c = cross(a, b);
    twice_area += c;
    sum = sum + c * (a + b);
  }
  out.area = 0.5 * twice_area;
  // local centroid = sum / (3 * twice_area); moment = area * (origin + local)
  out.moment = out.area * origin + (1.0 / 6.0) * sum;
  return out;
}

// Sign of the turn a -> b -> c: +1 left, -1 right, 0 collinear.
inline int orientation(Point a, Point b, Point c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

// True when collinear point p lies within the closed box spanned by a and b.
inline bool within_box(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection test (touching counts).
inline bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && within_box(p1, p2, q1)) return true;
  if (o2 == 0 && within_box(p1, p2, q2)) return true;
  if (o3 == 0 && within_box(q1, q2, p1)) return true;
  if (o4 == 0 && within_box(q1, q2, p2)) return true;
  return false;
}

// Two segments sharing endpoint `apex` overlap beyond that point iff they
// leave it in the same direction.
inline bool shared_endpoint_overlap(Point apex, Point a, Point b) {
  const Point u = a - apex;
  const Point v = b - apex;
  return cross(u, v) == 0.0 && dot(u, v) > 0.0;
}

}  // namespace cartogrammer
