#pragma once

// Exact planar predicates.  Every coordinate is a GMP rational; nothing in
// here rounds.

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordertypes/rational.hpp"

namespace ordertypes {

struct Point {
  Rational x;
  Rational y;

  Point() = default;
  Point(Rational px, Rational py) : x(std::move(px)), y(std::move(py)) {}
  Point(long px, long py) : x(px), y(py) {}

  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
};

using PointSet = std::vector<Point>;

/// Raised by operations whose precondition is general position when the input
/// contains a repeated point or an aligned triple.
class DegenerateConfiguration : public std::domain_error {
 public:
  explicit DegenerateConfiguration(const std::string& what) : std::domain_error(what) {}
};

/// +1 when r lies to the left of the line pq oriented from p to q
/// (counter-clockwise), -1 when it lies to the right, 0 when aligned.
int orient(const Point& p, const Point& q, const Point& r);

/// True iff the points are pairwise distinct and no three are aligned.
bool general_position(std::span<const Point> points);

/// Extreme points in counter-clockwise order, starting from the
/// lexicographically smallest one.  Sets of at most two points are returned
/// unchanged.  Throws DegenerateConfiguration if a repeated point or an aligned
/// triple is met while building the hull.
PointSet convex_hull(std::span<const Point> points);

/// Indices (into `points`) of the hull vertices, in the same order as
/// convex_hull.
std::vector<int> convex_hull_indices(std::span<const Point> points);

bool convex_position(std::span<const Point> points);

/// Number of nonempty onion layers; 0 for the empty set.
int peeling_depth(std::span<const Point> points);

/// Plain-text point set format:
///   OTPS v1 n=<size>
///   <x> <y>            (one line per point, each coordinate "p/q")
void write_point_set(std::ostream& out, std::span<const Point> points);
PointSet read_point_set(std::istream& in);

}  // namespace ordertypes
