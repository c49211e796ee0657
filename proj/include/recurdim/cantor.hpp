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


#ifndef RECURDIM_CANTOR_HPP_
#define RECURDIM_CANTOR_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "recurdim/ifs.hpp"
#include "recurdim/potential.hpp"
#include "recurdim/recurrence.hpp"

namespace recurdim {

struct GammaSelection {
  Word parent;
  int m = 0;
  std::vector<Word> selected;
  // l_w = log D_w - S_m f([w]) of each selected m-word.
  std::vector<double> log_weights;
  std::vector<Interval> intervals;
  double s_target = 0.0;
  double achieved_sum = 0.0;
  double separation_floor = 0.0;
  // 1 / (33 K).
  double sum_floor = 0.0;
  std::size_t candidates = 0;
};

// Greedy separated subfamily of the children I_{t+m}(v w), w in Lambda^m:
// by weight exp(s_target l_w) descending (ties: lexicographic), admitting a
// child iff its gap to every admitted child exceeds eta_m |I_t(v)|.
// Throws InvariantViolation if the achieved sum is below 1/(33K).
GammaSelection select_gamma(const IfsSystem& system, const Potential& pot, int m, WordView v,
                            double s_target, std::uint64_t budget = kDefaultBudget);

// s with sum_{w in Gamma} exp(s l_w) = 1; 0 for a singleton.
double local_root(const GammaSelection& gamma, double tol = 1e-13);

enum class NodeRole { root, interior, block, suffix };

struct CantorNode {
  Word word;
  int depth = 0;
  int generation = 0;
  NodeRole role = NodeRole::root;
  Interval interval{0.0, 1.0};
  int parent = -1;
  std::vector<int> children;
  // Block nodes: index of the node the block hangs from, the l_w of the
  // block word, and the local root of the selection that produced it.
  int block_parent = -1;
  double log_weight = 0.0;
  double s_local = 0.0;
  // End of a recurrence suffix (or of the block chain in a block tree).
  bool generation_leaf = false;
  int t = 0;
  double mass = 0.0;
};

struct CantorParams {
  int m = 2;
  double eps = 0.1;
  int k_max = 1;
  // Blocks per generation; the last entry repeats.
  std::vector<int> ell{1};
  std::uint64_t node_budget = 2'000'000;
  std::uint64_t enumeration_budget = kDefaultBudget;
  // s_m(f); computed when absent.
  std::optional<double> s_target;
  // Reference value of s(f) for the |s_m - s| < eps flag.
  std::optional<double> s_reference;
  double tol = 1e-12;
};

struct CantorFlags {
  bool ff4 = false;
  bool ff3 = false;
  bool ff3bis = false;
  bool ff10 = false;
  // Per generation k >= 2: m_k / k >= max n_{k-1} and
  // max n_{k-1} (1 + |f|) <= m_k eps.
  std::vector<bool> ff9;
  // Level one: m_1 >= n_0 + t_0 and n_0 + t_0 |f| <= m_1 eps.
  bool level1 = false;
  int n0 = 0;
  double ff4_bound = 0.0;
  double s_reference = 0.0;
  double ff3bis_lhs = 0.0;
  double ff3bis_rhs = 0.0;
};

struct CantorTree {
  CantorParams params;
  std::string system;
  std::string potential;
  bool suffixes = true;
  double s_target = 0.0;
  double distortion = 1.0;
  double eta_m = 0.0;
  double rho = 0.0;
  double sup_f = 0.0;
  CantorFlags flags;
  std::vector<CantorNode> nodes;
  std::vector<GammaSelection> selections;
  // Indices of the final-generation leaves.
  std::vector<int> leaves;
  bool measured = false;
};

// One generation of `blocks` chained selections and no recurrence suffix.
// Any nonnegative potential.
CantorTree build_block_tree(const IfsSystem& system, const Potential& pot, int m, int blocks,
                            std::optional<double> s_target = std::nullopt,
                            std::uint64_t node_budget = 2'000'000,
                            std::uint64_t enumeration_budget = kDefaultBudget);

// Generations 1..k_max: ell_k chained selections followed by the recurrence
// suffix w^{(k,*)}. Requires a strictly positive potential.
CantorTree build_levels(const IfsSystem& system, const Potential& pot,
                        const CantorParams& params);

struct MeasureNode {
  int node = 0;
  double mass = 0.0;
};

// Top-down masses on block and suffix nodes, bottom-up sums on interior
// nodes. Throws InvariantViolation when a consistency residual exceeds
// 1e-12.
std::vector<MeasureNode> assign_measure(CantorTree& tree);

struct TreeCheck {
  bool separation = true;
  bool disjoint_leaves = true;
  bool leaf_inclusion = true;
  bool local_root_order = true;
  // Cepsilon upper bound, evaluated only when ff3bis holds.
  std::optional<bool> local_root_gap;
  std::optional<bool> diameter_bound;
  bool t_bound = true;
  double min_separation_ratio = 0.0;
  std::vector<std::string> notes;
};

TreeCheck check_tree(const IfsSystem& system, const Potential& pot, const CantorTree& tree);

struct HolderRow {
  int node = 0;
  int depth = 0;
  double diameter = 0.0;
  double mass = 0.0;
  double local_exponent = 0.0;
};

struct HolderReport {
  double s_eps = 0.0;
  int start_depth = 1;
  double M = 0.0;
  double min_exponent = 0.0;
  double max_exponent = 0.0;
  bool passes = false;
  std::vector<HolderRow> rows;
  // Balls centred at leaf representatives: max mu(B) / |B|^s.
  double ball_M = 0.0;
  std::size_t balls = 0;
};

HolderReport holder_check(const CantorTree& tree, double s_eps, int start_depth = 1);

nlohmann::ordered_json to_json(const CantorTree& tree);
nlohmann::ordered_json to_json(const TreeCheck& check);
nlohmann::ordered_json to_json(const HolderReport& report);
std::string to_csv(const HolderReport& report);

}  // namespace recurdim

#endif  // RECURDIM_CANTOR_HPP_
