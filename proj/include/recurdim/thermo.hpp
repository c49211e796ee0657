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


#ifndef RECURDIM_THERMO_HPP_
#define RECURDIM_THERMO_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "recurdim/ifs.hpp"
#include "recurdim/potential.hpp"

namespace recurdim {

struct ThermoOptions {
  std::uint64_t budget = kDefaultBudget;
  int workers = 0;  // 0: default_workers()
  // Cylinder-sup weights instead of representative-point weights.
  bool sup_weights = false;
};

// Log weights l_w = log D_w - S_n f([w]) over all n-words, stored in
// lexicographic order and reduced in fixed-size chunks so that the log-sum
// is bitwise independent of the worker count. When few distinct weights
// occur (affine systems) they are summed as (value, multiplicity) levels.
class PartitionSums {
 public:
  static constexpr std::size_t kChunk = 4096;

  PartitionSums(const IfsSystem& system, const Potential& pot, int n,
                const ThermoOptions& options = {});
  // Weights supplied directly (local roots, covering series).
  PartitionSums(int n, std::vector<double> log_weights, int workers = 1);

  int depth() const { return n_; }
  std::size_t size() const { return log_weights_.size(); }
  const std::vector<double>& log_weights() const { return log_weights_; }
  double max_log_weight() const { return max_; }

  // log sum_w exp(s l_w).
  double log_sum(double s) const;
  int workers() const { return workers_; }
  // Number of distinct weights summed, or 0 when uncompressed.
  std::size_t levels() const { return levels_.size(); }

 private:
  void compress();

  int n_ = 0;
  int workers_ = 1;
  std::vector<double> log_weights_;
  double max_ = 0.0;
  std::vector<double> levels_;
  std::vector<double> log_counts_;
};

struct PressureSample {
  double s = 0.0;
  int n = 0;
  double value = 0.0;
};

PressureSample pressure_approx(const IfsSystem& system, const Potential& pot, double s, int n,
                               const ThermoOptions& options = {});

// A-priori bisection cap d (1 + 1/(1 + inf f / log(1/rho))), capped at 4.
double default_s_max(const IfsSystem& system, const Potential& pot);

struct BowenRoot {
  int n = 0;
  double s = 0.0;
  // |sum_w exp(s l_w) - 1|.
  double residual = 0.0;
  int iterations = 0;
};

// Root of log_sum(s) = 0 by bisection on [0, s_max], doubling s_max on
// demand. Throws BracketError when no bracket is found.
BowenRoot solve_bowen(const PartitionSums& sums, double tol, double s_max);

BowenRoot bowen_root(const IfsSystem& system, const Potential& pot, int n, double tol = 1e-12,
                     const ThermoOptions& options = {});

struct RichardsonStep {
  int n = 0;
  int n2 = 0;
  double value = 0.0;
};

struct Extrapolation {
  double value = 0.0;
  // 2 s_{2n} - s_n for every doubling pair, ordered by n.
  std::vector<RichardsonStep> steps;
  // (n2 s_{n2} - n1 s_{n1}) / (n2 - n1) for consecutive depths.
  std::vector<RichardsonStep> two_point;
};

Extrapolation bowen_extrapolate(std::vector<std::pair<int, double>> roots);

struct DimensionOptions {
  std::vector<int> depths{4, 6, 8, 10, 12};
  double tol = 1e-12;
  double delta = 1e-2;
  ThermoOptions thermo;
};

struct BowenReport {
  std::string system;
  std::string potential;
  DimensionOptions options;
  std::vector<BowenRoot> samples;
  Extrapolation extrapolation;
  // |s_n - s_{2n}| for doubling pairs.
  std::vector<RichardsonStep> gaps;
  PressureSample below;
  PressureSample above;
  bool bracket_ok = false;
  double s_max = 0.0;
  double rho = 0.0;
  double eta = 0.0;
  double distortion = 1.0;
  bool distortion_certified = true;
};

BowenReport dimension_report(const IfsSystem& system, const Potential& pot,
                             const DimensionOptions& options = {});

nlohmann::ordered_json to_json(const BowenReport& report);

}  // namespace recurdim

#endif  // RECURDIM_THERMO_HPP_
