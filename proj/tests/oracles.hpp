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


#ifndef RECURDIM_TESTS_ORACLES_HPP_
#define RECURDIM_TESTS_ORACLES_HPP_

// Reference computations written without the library: boost::rational
// endpoints, convergent recursions and brute-force sums.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>
#include <boost/rational.hpp>

namespace oracle {

using Q = boost::rational<long long>;

inline double to_d(const Q& q) { return boost::rational_cast<double>(q); }

// Branch x -> a x + c with rational data.
struct Affine {
  Q a;
  Q c;
};

// phi_w([0, 1]) for an affine system; returns {lo, hi}.
inline std::pair<Q, Q> affine_cylinder(const std::vector<Affine>& br,
                                       const std::vector<int>& w) {
  Q lo = 0, hi = 1;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    Q x = br[*it].a * lo + br[*it].c;
    Q y = br[*it].a * hi + br[*it].c;
    lo = std::min(x, y);
    hi = std::max(x, y);
  }
  return {lo, hi};
}

// Convergents of [a_1, ..., a_n]: returns {p_n, q_n, p_{n-1}, q_{n-1}}.
struct Convergents {
  long long p, q, pp, qq;
};

inline Convergents convergents(const std::vector<long long>& a) {
  long long p = 0, q = 1, pp = 1, qq = 0;
  for (long long d : a) {
    const long long np = d * p + pp;
    const long long nq = d * q + qq;
    pp = p;
    qq = q;
    p = np;
    q = nq;
  }
  return {p, q, pp, qq};
}

// I_n(a_1..a_n) has endpoints p_n/q_n and (p_n + p_{n-1})/(q_n + q_{n-1}).
inline std::pair<Q, Q> cf_cylinder(const std::vector<long long>& a) {
  const auto c = convergents(a);
  Q x(c.p, c.q), y(c.p + c.pp, c.q + c.qq);
  return {std::min(x, y), std::max(x, y)};
}

// Fixed point of x -> [a_1, ..., a_n + x] by iteration.
inline double cf_fixed_point(const std::vector<long long>& a) {
  double x = 0.5;
  for (int it = 0; it < 200; ++it) {
    double y = x;
    for (auto k = a.rbegin(); k != a.rend(); ++k) y = 1.0 / (static_cast<double>(*k) + y);
    x = y;
  }
  return x;
}

// |phi_w'(x)| = 1 / (q_n + q_{n-1} x)^2.
inline double cf_derivative(const std::vector<long long>& a, double x) {
  const auto c = convergents(a);
  const double d = static_cast<double>(c.q) + static_cast<double>(c.qq) * x;
  return 1.0 / (d * d);
}

// All words of length n over {0..k-1}.
inline void for_each_word(int k, int n, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> w(static_cast<std::size_t>(n), 0);
  while (true) {
    f(w);
    int i = n - 1;
    while (i >= 0 && w[static_cast<std::size_t>(i)] == k - 1) {
      w[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) return;
    ++w[static_cast<std::size_t>(i)];
  }
}

// Root of a decreasing function on [lo, hi] with TOMS 748.
inline double root_toms748(const std::function<double(double)>& g, double lo, double hi) {
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(g, lo, hi,
                                             boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

// Deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  long long integer(long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(rng_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::vector<int> word(int k, int n) {
    std::vector<int> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = static_cast<int>(integer(0, k - 1));
    return w;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle

#endif  // RECURDIM_TESTS_ORACLES_HPP_
