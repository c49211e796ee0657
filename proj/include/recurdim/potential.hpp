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


#ifndef RECURDIM_POTENTIAL_HPP_
#define RECURDIM_POTENTIAL_HPP_

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "recurdim/exact.hpp"
#include "recurdim/ifs.hpp"

namespace recurdim {

enum class PotentialKind { constant, logderiv, digitind, callback };

// Nonnegative potential f on [0, 1]. Values are taken on a first-level
// cylinder: value(system, i, z) is f(phi_i(z)).
class Potential {
 public:
  static Potential constant(double c);
  // f = t log|T'|.
  static Potential logderiv(double t);
  // f = t log(b) 1[first symbol = digit]. Without an explicit base, b is
  // 1/|slope| of the indicated affine branch.
  static Potential digit_indicator(double t, Symbol digit,
                                   std::optional<double> base = std::nullopt);
  static Potential callback(std::function<double(double)> f,
                            std::string name = "callback");

  PotentialKind kind() const { return kind_; }
  double parameter() const { return param_; }
  Symbol digit() const { return digit_; }
  std::optional<double> base() const { return base_; }
  const std::string& descriptor() const { return descriptor_; }

  // log b for digit-indicator potentials on the given system.
  double log_base(const IfsSystem& system) const;

  double value(const IfsSystem& system, Symbol first, double z) const;
  // f at a point x of [0, 1], located through the branch images.
  double at(const IfsSystem& system, double x) const;

  double sup_norm(const IfsSystem& system) const;
  double inf(const IfsSystem& system) const;
  bool identically_zero() const;
  // inf f > 0, or a logderiv potential with t > 0.
  bool strictly_positive(const IfsSystem& system) const;

  // Throws ContractError when f is incompatible with the system.
  void validate(const IfsSystem& system) const;

 private:
  Potential() = default;

  PotentialKind kind_ = PotentialKind::constant;
  double param_ = 0.0;
  Symbol digit_ = 0;
  std::optional<double> base_;
  std::function<double(double)> callback_;
  std::string descriptor_;
};

// const:c=<real> | logderiv:t=<real> | digitind:t=<real>,digit=<int>[,base=<real>]
Potential parse_potential(std::string_view descriptor);

// S_n f at the representative point of the word (the fixed point of phi_w).
double birkhoff_sum(const IfsSystem& system, const Potential& pot, WordView word);
double birkhoff_sum(const IfsSystem& system, const Potential& pot,
                    const CylinderRecord& record);

// S_n f at phi_w(z): the orbit phi_w(z), phi_{w_2..w_n}(z), ..., phi_{w_n}(z).
double birkhoff_sum_at(const IfsSystem& system, const Potential& pot,
                       WordView word, double z);

// r = exp(-S_n f([w])), computed in closed form where the potential allows.
double recurrence_radius(const IfsSystem& system, const Potential& pot,
                         const CylinderRecord& record);

// Exact radius for affine systems with rational data: logderiv and
// digitind with integral t, and const with c = 0.
std::optional<Rational> exact_recurrence_radius(const IfsSystem& system,
                                                const Potential& pot,
                                                WordView word);

struct VariationBound {
  int n = 0;
  double bound = 0.0;
  bool certified = true;
};

VariationBound variation_bound(const IfsSystem& system, const Potential& pot, int n,
                               std::uint64_t budget = kDefaultBudget);

// Smallest n <= n_max with (1/n) sum_{j<=n} Var_j(f) <= eps; this bounds
// |S_n f(x) - S_n f(y)| / n on n-cylinders.
std::optional<int> tempered_threshold(const IfsSystem& system, const Potential& pot,
                                      double eps, int n_max,
                                      std::uint64_t budget = kDefaultBudget);

}  // namespace recurdim

#endif  // RECURDIM_POTENTIAL_HPP_
