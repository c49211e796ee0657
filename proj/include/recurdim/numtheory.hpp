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


#ifndef RECURDIM_NUMTHEORY_HPP_
#define RECURDIM_NUMTHEORY_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "recurdim/exact.hpp"
#include "recurdim/ifs.hpp"

namespace recurdim {

// Partial quotients a_1, a_2, ... of [a_1, a_2, ...] = 1/(a_1 + 1/(a_2 + ...)).
using CfDigits = std::vector<std::int64_t>;

// The two expansions of p/q in (0, 1): last digit >= 2, and the variant
// ending in 1.
std::pair<CfDigits, CfDigits> cf_expansions_of_rational(std::int64_t p, std::int64_t q);

Rational evaluate_cf(const CfDigits& digits);

// Convergent denominators q_1..q_n of [a_1, ..., a_n].
std::vector<std::int64_t> cf_denominators(const CfDigits& digits);

// Root in [0, 1] of A x^2 + B x + C = 0 with A > 0 and gcd(A, B, C) = 1,
// equal to [(period)^inf].
struct QuadraticSurd {
  std::int64_t A = 0;
  std::int64_t B = 0;
  std::int64_t C = 0;
  double root = 0.0;
  CfDigits period;
  std::int64_t p = 0;
  std::int64_t q = 0;

  std::int64_t discriminant() const { return B * B - 4 * A * C; }
};

bool same_surd(const QuadraticSurd& a, const QuadraticSurd& b);

// Fixed point of phi_{a_1} o ... o phi_{a_n}; throws InvariantViolation if
// its exact expansion is not purely periodic with this period.
QuadraticSurd periodic_surd(const CfDigits& period);

// First `count` partial quotients of the surd, in exact integer arithmetic.
CfDigits surd_cf_digits(const QuadraticSurd& x, std::size_t count);

// The quadratic residual A x^2 + B x + C at the stored root.
double surd_residual(const QuadraticSurd& x);

std::pair<QuadraticSurd, QuadraticSurd> induced_quadratics(std::int64_t p, std::int64_t q);

struct AqSet {
  std::int64_t q = 0;
  std::vector<QuadraticSurd> members;
};

// Deduplicated by coefficient triple; |members| <= 2q is asserted.
AqSet enumerate_Aq(std::int64_t q);

std::string to_csv(const std::vector<AqSet>& sets);
nlohmann::ordered_json to_json(const AqSet& set);

struct DtauWitness {
  std::int64_t q = 0;
  QuadraticSurd nearest;
  double distance = 0.0;
  double threshold = 0.0;
  bool refined = false;
};

// All q <= q_max with d(x, A_q) < q^{-2(tau + 1)}. About q_max^2 surds are
// generated, which must fit in `budget`.
std::vector<DtauWitness> dtau_membership(double x, double tau, std::int64_t q_max,
                                         std::uint64_t budget = kDefaultBudget,
                                         int workers = 1);
// Same for a surd target; coinciding triples have distance exactly 0.
std::vector<DtauWitness> dtau_membership(const QuadraticSurd& x, double tau,
                                         std::int64_t q_max,
                                         std::uint64_t budget = kDefaultBudget,
                                         int workers = 1);

struct ChainPoint {
  Rational x;
  double displacement = 0.0;
  double distance = 0.0;
  bool recurrence = false;
  bool expansion = false;
  bool half_expansion = false;
  bool approximation = false;
};

// The inequalities linking a recurrence witness of the continued-fraction
// system with f = (tau + eps) log|T'| to the sets A_q, checked exactly at the
// endpoints and midpoint of the witness cylinder.
struct DtauChain {
  CfDigits digits;
  int n = 0;
  int t = 0;
  double tau = 0.0;
  double eps = 0.0;
  std::int64_t q_n = 0;
  QuadraticSurd x0;
  bool x0_in_Aq = false;
  bool same_q_n = false;
  // q_n^{2 eps} (1 - q_n^{-2}) >= 1: the regime where the final bound applies.
  bool large_n = false;
  std::vector<ChainPoint> points;
  bool holds = false;
};

DtauChain dtau_chain_check(const CfDigits& digits, double tau, double eps);

// ||(b^n - 1) x|| < b^{-t n} at a recurrence witness of an affine system
// whose branches all have slope 1/b, with f = t log|T'|.
struct MahlerCheck {
  Word word;
  int n = 0;
  int t = 0;
  std::int64_t base = 0;
  std::vector<Rational> points;
  std::vector<double> distances;
  double bound = 0.0;
  bool holds = false;
};

MahlerCheck mahler_check(const IfsSystem& system, WordView word, int t);

// badic-const, dyadic-frequency, dtau, cantor-const; the parameter is t
// (tau for dtau). dtau returns 1/(tau + 1), a theorem for tau >= 2 only.
double closed_form_dimension(std::string_view id, double parameter);

}  // namespace recurdim

#endif  // RECURDIM_NUMTHEORY_HPP_
