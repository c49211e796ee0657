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

#ifndef RECURDIM_IFS_HPP_
#define RECURDIM_IFS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recurdim/exact.hpp"
#include "recurdim/projective.hpp"

namespace recurdim {

using Symbol = std::uint32_t;
// Finite word of 0-based branch indices. For continued-fraction systems
// index i stands for the digit i + 1.
using Word = std::vector<Symbol>;
using WordView = std::span<const Symbol>;

inline constexpr std::uint64_t kDefaultBudget = 50'000'000;

enum class BranchKind { affine, moebius, callback };

struct CallbackBranch {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  bool increasing = true;
};

// One inverse branch phi_i : [0, 1] -> [0, 1].
class BranchSpec {
 public:
  static BranchSpec affine(const Rational& slope, const Rational& offset);
  static BranchSpec affine(double slope, double offset);
  // x -> 1 / (digit + x), digit >= 1.
  static BranchSpec moebius(int digit);
  static BranchSpec callback(CallbackBranch branch);

  BranchKind kind() const { return kind_; }
  bool is_projective() const { return kind_ != BranchKind::callback; }

  double value(double x) const;
  // Signed derivative.
  double derivative(double x) const;

  // Only for affine and moebius branches.
  const ProjectiveMap<double>& map() const { return map_; }
  const ProjectiveMap<Rational>& exact_map() const { return exact_; }
  int digit() const { return digit_; }

 private:
  BranchSpec() = default;

  BranchKind kind_ = BranchKind::affine;
  ProjectiveMap<double> map_;
  ProjectiveMap<Rational> exact_;
  CallbackBranch callback_;
  int digit_ = 0;
};

// Finite conformal IFS on [0, 1]. Immutable after construction and safe to
// share read-only between threads.
class IfsSystem {
 public:
  // Validates alphabet size, contraction, images inside [0, 1] and interior
  // disjointness of the branch images; computes rho, eta and K.
  explicit IfsSystem(std::vector<BranchSpec> branches,
                     std::string descriptor = "custom");

  std::size_t alphabet_size() const { return branches_.size(); }
  const BranchSpec& branch(Symbol i) const { return branches_.at(i); }
  const std::string& descriptor() const { return descriptor_; }

  bool is_projective() const { return projective_; }
  bool is_affine() const { return affine_; }

  // Per-step contraction rate. For systems whose one-step sup |phi_i'| is 1
  // (continued fractions) this is the square root of the depth-2 sup.
  double rho() const { return rho_; }
  double rho_one_step() const { return rho_one_step_; }
  int contraction_depth() const { return contraction_depth_; }
  // min over branches of inf |phi_i'| on [0, 1].
  double eta() const { return eta_; }
  // Bounded distortion constant K >= 1; exactly 1 for affine systems.
  double distortion() const { return distortion_; }
  bool distortion_certified() const { return distortion_certified_; }

  // Smallest cylinder diameter at depth m (cached).
  double eta_m(int m, std::uint64_t budget = kDefaultBudget) const;

  void validate_word(WordView word) const;

  // phi_w = phi_{w_1} o ... o phi_{w_n}; identity for the empty word.
  ProjectiveMap<double> word_map(WordView word) const;
  ProjectiveMap<Rational> exact_word_map(WordView word) const;

  double apply(WordView word, double x) const;
  // Signed derivative of phi_w at x (chain rule).
  double derivative(WordView word, double x) const;
  Interval image(WordView word) const;
  // T^n restricted to I_n(w), i.e. phi_w^{-1}(y).
  double inverse_apply(WordView word, double y) const;

 private:
  std::vector<BranchSpec> branches_;
  std::string descriptor_;
  bool projective_ = true;
  bool affine_ = true;
  double rho_ = 0.0;
  double rho_one_step_ = 0.0;
  int contraction_depth_ = 1;
  double eta_ = 0.0;
  double distortion_ = 1.0;
  bool distortion_certified_ = true;

  struct EtaCache {
    std::mutex mutex;
    std::map<int, double> values;
  };
  std::shared_ptr<EtaCache> eta_cache_ = std::make_shared<EtaCache>();
};

// badic:b=<int>  cantor:b=<int>,digits=<d1>|<d2>|...  cf:amax=<int>
// affine:[(a1,c1),(a2,c2),...]
IfsSystem build_system(std::string_view descriptor);

struct CylinderRecord {
  Word word;
  Interval interval;
  double diameter = 0.0;
  // D_w = |phi_w'(x*)|, equal to |(T^n)'([w])|^{-1}.
  double derivative = 0.0;
  // Representative point [w]: the fixed point of phi_w.
  double fixed_point = 0.0;
  // Composed map; identity for callback systems.
  ProjectiveMap<double> map;
};

CylinderRecord cylinder_record(const IfsSystem& system, WordView word);

// Record for word + symbol, built from the parent by one more composition.
CylinderRecord extend_cylinder(const IfsSystem& system,
                               const CylinderRecord& parent, Symbol symbol);

struct EnumerationOptions {
  std::uint64_t budget = kDefaultBudget;
};

// Number of words of length n, saturating at UINT64_MAX.
std::uint64_t word_count(std::size_t alphabet, int n);

// Throws BudgetExceeded when alphabet^n exceeds the budget.
void check_budget(const IfsSystem& system, int n, std::uint64_t budget);

// Visits all |alphabet|^n cylinders of depth n once each, in lexicographic
// order. The record passed to the visitor is reused between calls.
void enumerate_cylinders(const IfsSystem& system, int n,
                         const std::function<void(const CylinderRecord&)>& visit,
                         const EnumerationOptions& options = {});

// Same, restricted to words starting with `prefix` (|prefix| <= n).
void enumerate_cylinders_with_prefix(
    const IfsSystem& system, WordView prefix, int n,
    const std::function<void(const CylinderRecord&)>& visit);

std::vector<CylinderRecord> cylinders(const IfsSystem& system, int n,
                                      const EnumerationOptions& options = {});

// Word with index `rank` in lexicographic order among words of length n.
Word word_from_rank(std::size_t alphabet, int n, std::uint64_t rank);

// First `length` symbols of the periodic word w w w ...
Word periodic_prefix(WordView word, std::size_t length);

std::string format_word(WordView word);

}  // namespace recurdim

#endif  // RECURDIM_IFS_HPP_
