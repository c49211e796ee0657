// Copyright 2026 The recurdim Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RECURDIM_PROJECTIVE_HPP_
#define RECURDIM_PROJECTIVE_HPP_

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Core>

namespace recurdim {

// Closed interval [lo, hi].
template <typename Scalar>
struct BasicInterval {
  Scalar lo;
  Scalar hi;

  Scalar length() const { return hi - lo; }
  bool contains(const Scalar& x) const { return lo <= x && x <= hi; }
  bool contains(const BasicInterval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
  Scalar midpoint() const { return (lo + hi) / Scalar(2); }
};

using Interval = BasicInterval<double>;

// Gap between two closed intervals; zero when they touch or overlap.
template <typename Scalar>
Scalar gap(const BasicInterval<Scalar>& a, const BasicInterval<Scalar>& b) {
  if (a.hi < b.lo) return b.lo - a.hi;
  if (b.hi < a.lo) return a.lo - b.hi;
  return Scalar(0);
}

// Linear fractional map x -> (p x + q) / (r x + s), stored as the matrix
// [[p, q], [r, s]]. Composition of maps is the matrix product, so a word
// map phi_{w_1} o ... o phi_{w_n} is the ordered product of branch matrices.
template <typename Scalar>
class ProjectiveMap {
 public:
  using Matrix = Eigen::Matrix<Scalar, 2, 2>;

  ProjectiveMap() : m_(Matrix::Identity()) {}
  explicit ProjectiveMap(const Matrix& m) : m_(m) {}

  static ProjectiveMap affine(const Scalar& slope, const Scalar& offset) {
    Matrix m;
    m << slope, offset, Scalar(0), Scalar(1);
    return ProjectiveMap(m);
  }

  // x -> 1 / (digit + x), the inverse branches of the Gauss map.
  static ProjectiveMap continued_fraction(const Scalar& digit) {
    Matrix m;
    m << Scalar(0), Scalar(1), Scalar(1), digit;
    return ProjectiveMap(m);
  }

  const Matrix& matrix() const { return m_; }

  Scalar operator()(const Scalar& x) const {
    return (m_(0, 0) * x + m_(0, 1)) / (m_(1, 0) * x + m_(1, 1));
  }

  Scalar determinant() const {
    return m_(0, 0) * m_(1, 1) - m_(0, 1) * m_(1, 0);
  }

  // Signed derivative det / (r x + s)^2.
  Scalar derivative(const Scalar& x) const {
    const Scalar den = m_(1, 0) * x + m_(1, 1);
    return determinant() / (den * den);
  }

  // Inverse map (adjugate; projective matrices are defined up to scale).
  ProjectiveMap inverse() const {
    Matrix a;
    a << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
    return ProjectiveMap(a);
  }

  bool is_affine() const { return m_(1, 0) == Scalar(0); }

  // Image of [0, 1]; valid because the denominator has no pole on [0, 1]
  // for every map this library builds.
  BasicInterval<Scalar> image_of_unit() const {
    const Scalar a = (*this)(Scalar(0));
    const Scalar b = (*this)(Scalar(1));
    return a < b ? BasicInterval<Scalar>{a, b} : BasicInterval<Scalar>{b, a};
  }

  template <typename To>
  ProjectiveMap<To> cast() const {
    return ProjectiveMap<To>(m_.template cast<To>());
  }

 private:
  Matrix m_;
};

// (a * b)(x) = a(b(x)).
template <typename Scalar>
ProjectiveMap<Scalar> operator*(const ProjectiveMap<Scalar>& a,
                                const ProjectiveMap<Scalar>& b) {
  return ProjectiveMap<Scalar>(a.matrix() * b.matrix());
}

// Unique fixed point in [0, 1] of a contracting map of [0, 1] into itself.
// Affine maps are solved linearly, Moebius maps by the numerically stable
// form of the quadratic formula for r x^2 + (s - p) x - q = 0.
inline std::optional<double> fixed_point(const ProjectiveMap<double>& map) {
  const auto& m = map.matrix();
  const double a = m(1, 0);
  const double b = m(1, 1) - m(0, 0);
  const double c = -m(0, 1);
  constexpr double kSlack = 1e-12;
  auto in_unit = [](double x) { return x >= -kSlack && x <= 1.0 + kSlack; };
  auto clamp = [](double x) { return std::clamp(x, 0.0, 1.0); };
  if (a == 0.0) {
    if (b == 0.0) return std::nullopt;
    const double x = -c / b;
    return in_unit(x) ? std::optional<double>(clamp(x)) : std::nullopt;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  const double qd = -0.5 * (b + std::copysign(root, b));
  const double x1 = qd / a;
  const double x2 = qd != 0.0 ? c / qd : x1;
  if (in_unit(x1)) return clamp(x1);
  if (in_unit(x2)) return clamp(x2);
  return std::nullopt;
}

}  // namespace recurdim

#endif  // RECURDIM_PROJECTIVE_HPP_
