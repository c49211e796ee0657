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


#ifndef RECURDIM_RECURRENCE_HPP_
#define RECURDIM_RECURRENCE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "recurdim/ifs.hpp"
#include "recurdim/potential.hpp"
#include "recurdim/thermo.hpp"

namespace recurdim {

// Unique t >= 1 with |I_t(w^inf)| < r <= |I_{t-1}(w^inf)|.
int return_depth(const IfsSystem& system, WordView word, double r);
// Exact version for affine and moebius systems.
int return_depth(const IfsSystem& system, WordView word, const Rational& r);

struct RecurrenceWitness {
  Word word;
  int n = 0;
  int t = 0;
  Word suffix;
  Interval interval;
  double radius = 0.0;
  bool exact_radius = false;
  // K^{-1} eta r |I_n(w)|.
  double lower_bound = 0.0;
  bool lower_bound_holds = false;
  // max |T^n x - x| over the endpoints and midpoint.
  double max_displacement = 0.0;
};

// Builds the witness I_{n+t}(w w*) for r = exp(-S_n f([w])) and
// verifies |T^n x - x| < r at its endpoints and midpoint (exactly for
// affine and moebius systems). Throws InvariantViolation on failure.
RecurrenceWitness witness_cylinder(const IfsSystem& system, const Potential& pot,
                                   WordView word);
// Same with an explicit radius.
RecurrenceWitness witness_for_radius(const IfsSystem& system, WordView word, double r,
                                     std::optional<Rational> exact_r = std::nullopt);

template <typename Scalar>
struct JnInterval {
  BasicInterval<Scalar> interval{Scalar(0), Scalar(0)};
  bool empty = true;
  Scalar length() const { return empty ? Scalar(0) : interval.length(); }
};

// {x in I_n(w) : |T^n x - x| < r} for affine systems, where T^n x is
// sigma x + beta on I_n(w). The set is open in x; the closure is returned.
template <typename Scalar>
JnInterval<Scalar> jn_interval_for_radius(const IfsSystem& system, WordView word,
                                          const Scalar& r);

JnInterval<Rational> jn_exact_interval(const IfsSystem& system, const Potential& pot,
                                       WordView word);

struct CoveringRow {
  int n = 0;
  std::uint64_t word_count = 0;
  double s = 0.0;
  // log sum_w (4K D_w r_w)^s.
  double log_contribution = 0.0;
  // Same with constant 2K.
  double log_contribution_2k = 0.0;
};

enum class CoveringTrend { decaying, critical, growing };

struct CoveringTrendRow {
  double s = 0.0;
  // L_M(s) - L_{M-1}(s).
  double growth = 0.0;
  CoveringTrend trend = CoveringTrend::critical;
  // log of the partial sum over n in [N, M].
  double log_partial_sum = 0.0;
};

struct CoveringReport {
  std::string system;
  std::string potential;
  int n_min = 0;
  int n_max = 0;
  std::vector<double> s_grid;
  double distortion = 1.0;
  std::vector<CoveringRow> rows;
  std::vector<CoveringTrendRow> trends;
  // Zero of L_M(s) - L_{M-1}(s); empty when N == M or no sign change.
  std::optional<double> critical_exponent;
  std::uint64_t budget = kDefaultBudget;
  int workers = 1;
};

CoveringReport covering_report(const IfsSystem& system, const Potential& pot, int n_min,
                               int n_max, std::vector<double> s_grid,
                               const ThermoOptions& options = {});

nlohmann::ordered_json to_json(const CoveringReport& report);
std::string to_csv(const CoveringReport& report);
nlohmann::ordered_json to_json(const RecurrenceWitness& witness);

}  // namespace recurdim

#endif  // RECURDIM_RECURRENCE_HPP_
