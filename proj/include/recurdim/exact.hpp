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

#ifndef RECURDIM_EXACT_HPP_
#define RECURDIM_EXACT_HPP_

// Exact rational scalar usable inside Eigen matrices.
//
// Boost 1.74 instantiates `is_byte_container` on any type it is asked to
// convert from, including Eigen expression templates, which is a hard error.
// Later Boost releases exclude Eigen types; the specialization below does
// the same and must be seen before <boost/multiprecision/cpp_int.hpp>.

#include <type_traits>

#include <Eigen/Core>
#include <boost/multiprecision/traits/is_byte_container.hpp>

namespace boost::multiprecision::detail {
template <class C>
  requires std::is_base_of_v<Eigen::EigenBase<C>, C>
struct is_byte_container<C> : std::false_type {};
}  // namespace boost::multiprecision::detail

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <string>
#include <string_view>

namespace recurdim {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "3", "-0.25", "1/3", "2.5e-1" into an exact rational.
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& q) { return static_cast<double>(q); }
inline double to_double(double x) { return x; }

// Every finite double is a dyadic rational; this is exact.
inline Rational exact_from_double(double x) { return Rational(x); }

}  // namespace recurdim

#endif  // RECURDIM_EXACT_HPP_
