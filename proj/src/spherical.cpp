#include "ordertypes/spherical.hpp"

namespace ordertypes {

Matrix3 identity3() {
  Matrix3 m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = i == j ? 1 : 0;
  }
  return m;
}

Rational det3(const Matrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

bool is_rotation(const Matrix3& m) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Rational dot = 0;
      for (int k = 0; k < 3; ++k) dot += m[i][k] * m[j][k];
      if (dot != (i == j ? 1 : 0)) return false;
    }
  }
  return det3(m) == 1;
}

Matrix3 cayley_rotation(const Rational& a, const Rational& b, const Rational& c) {
  // R = I + 2 (S + S^2) / (1 + a^2 + b^2 + c^2)
  const Matrix3 s = {{{0, -c, b}, {c, 0, -a}, {-b, a, 0}}};
  Matrix3 r = identity3();
  const Rational scale = Rational(2) / (1 + a * a + b * b + c * c);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Rational s2 = 0;
      for (int k = 0; k < 3; ++k) s2 += s[i][k] * s[k][j];
      r[i][j] += scale * (s[i][j] + s2);
    }
  }
  return r;
}

Matrix3 random_rotation(Rng& rng, double range, int bits) {
  const auto draw = [&] { return dyadic_round((2 * rng.uniform() - 1) * range, bits); };
  const Rational a = draw(), b = draw(), c = draw();
  return cayley_rotation(a, b, c);
}

Matrix3 z_rotation(const Rational& s) {
  const Rational den = 1 + s * s;
  const Rational cs = (1 - s * s) / den, sn = 2 * s / den;
  return {{{cs, -sn, 0}, {sn, cs, 0}, {0, 0, 1}}};
}

namespace {

PointSet projective_image(std::span<const Point> points, const Matrix3& m, const AffineMap& g) {
  PointSet out;
  out.reserve(points.size());
  for (const auto& p : points) {
    Rational v[3];
    for (int i = 0; i < 3; ++i) v[i] = m[i][0] * p.x + m[i][1] * p.y + m[i][2];
    if (sgn(v[2]) <= 0) throw HemisphereViolation("lifted point leaves the upper hemisphere");
    out.push_back(g({v[0] / v[2], v[1] / v[2]}));
  }
  return out;
}

}  // namespace

PointSet spherical_transform(std::span<const Point> points, const Matrix3& rotation, const AffineMap& g) {
  if (!is_rotation(rotation)) throw std::invalid_argument("not a rotation");
  if (sgn(g.a * g.d - g.b * g.c) <= 0) throw std::invalid_argument("affine part must be direct");
  return projective_image(points, rotation, g);
}

Matrix3 compactifying_map(const Rational& alpha, const Rational& beta, const Rational& gamma) {
  if (alpha == 0 && beta == 0) throw std::invalid_argument("degenerate line");
  // rows u, n x u, n with u = (-beta, alpha, 0): orthogonal rows of lengths
  // |u|, |n||u|, |n|, right-handed
  return {{{-beta, alpha, 0},
           {-gamma * alpha, -gamma * beta, alpha * alpha + beta * beta},
           {alpha, beta, gamma}}};
}

PointSet compactify(std::span<const Point> points, const Rational& alpha, const Rational& beta,
                    const Rational& gamma) {
  int side = 0;
  for (const auto& p : points) {
    const int s = sgn(Rational(alpha * p.x + beta * p.y + gamma));
    if (s == 0 || (side != 0 && s != side)) throw HemisphereViolation("points must lie strictly on one side of the line");
    side = s;
  }
  if (side < 0) return compactify(points, -alpha, -beta, -gamma);
  return projective_image(points, compactifying_map(alpha, beta, gamma), AffineMap{});
}

}  // namespace ordertypes
