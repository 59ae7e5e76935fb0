#pragma once

// Spherical transforms: lift to the upper hemisphere, rotate, project back.

#include <array>
#include <span>
#include <stdexcept>

#include "ordertypes/geometry.hpp"
#include "ordertypes/rng.hpp"

namespace ordertypes {

using Matrix3 = std::array<std::array<Rational, 3>, 3>;

Matrix3 identity3();
Rational det3(const Matrix3& m);
bool is_rotation(const Matrix3& m);

/// (I - S)^-1 (I + S) for the skew matrix of (a, b, c): exactly orthogonal,
/// determinant +1.
Matrix3 cayley_rotation(const Rational& a, const Rational& b, const Rational& c);
/// Cayley rotation with dyadic parameters in [-range, range].
Matrix3 random_rotation(Rng& rng, double range = 4, int bits = 8);
/// Rotation by the angle with cos = (1-s^2)/(1+s^2) about the z-axis.
Matrix3 z_rotation(const Rational& s);

struct AffineMap {
  Rational a = 1, b = 0, c = 0, d = 1;  // linear part [[a, b], [c, d]]
  Rational e = 0, f = 0;                // translation

  Point operator()(const Point& p) const { return {a * p.x + b * p.y + e, c * p.x + d * p.y + f}; }
};

class HemisphereViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// g o iota^-1 o h o iota.  Throws HemisphereViolation if some lifted point
/// leaves z > 0, std::invalid_argument if g is not direct or h is not a
/// rotation.
PointSet spherical_transform(std::span<const Point> points, const Matrix3& rotation, const AffineMap& g = {});

/// Rotation taking the great circle of the line alpha x + beta y + gamma = 0
/// to z = 0, with its positive side sent to z > 0, up to a positive row
/// scaling (absorbed as a direct linear map).
Matrix3 compactifying_map(const Rational& alpha, const Rational& beta, const Rational& gamma);

/// Image of a point set lying strictly on one side of the line; bounded by
/// construction.  Throws HemisphereViolation if the set meets or straddles
/// the line.
PointSet compactify(std::span<const Point> points, const Rational& alpha, const Rational& beta,
                    const Rational& gamma);

}  // namespace ordertypes
