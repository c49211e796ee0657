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

#include "recurdim/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "recurdim/error.hpp"
#include "recurdim/thermo.hpp"

namespace recurdim {
namespace {

constexpr double kConsistencyTol = 1e-12;
constexpr std::size_t kMaxBallCentres = 2000;

struct Candidate {
  Word word;
  double log_weight = 0.0;
  Interval interval;
  BasicInterval<Rational> exact{0, 0};
};

void add_node(CantorTree& tree, CantorNode node) {
  if (tree.nodes.size() >= tree.params.node_budget) {
    throw BudgetExceeded("Cantor tree exceeds node budget " +
                         std::to_string(tree.params.node_budget));
  }
  const int index = static_cast<int>(tree.nodes.size());
  if (node.parent >= 0) tree.nodes[static_cast<std::size_t>(node.parent)].children.push_back(index);
  tree.nodes.push_back(std::move(node));
}

int child_with_symbol(const CantorTree& tree, int parent, Symbol s) {
  for (int c : tree.nodes[static_cast<std::size_t>(parent)].children) {
    if (tree.nodes[static_cast<std::size_t>(c)].word.back() == s) return c;
  }
  return -1;
}

CantorNode make_node(const IfsSystem& system, const CantorTree& tree, int parent, Symbol s,
                     NodeRole role, int generation) {
  CantorNode node;
  node.word = tree.nodes[static_cast<std::size_t>(parent)].word;
  node.word.push_back(s);
  node.depth = static_cast<int>(node.word.size());
  node.generation = generation;
  node.role = role;
  node.interval = system.image(node.word);
  node.parent = parent;
  return node;
}

// Chains `blocks` selections below `start`; returns the block-end nodes.
std::vector<int> grow_blocks(const IfsSystem& system, const Potential& pot, CantorTree& tree,
                             int start, int blocks, int generation) {
  const int m = tree.params.m;
  std::vector<int> frontier{start};
  for (int b = 0; b < blocks; ++b) {
    std::vector<int> next;
    for (int p : frontier) {
      const Word v = tree.nodes[static_cast<std::size_t>(p)].word;
      GammaSelection gamma =
          select_gamma(system, pot, m, v, tree.s_target, tree.params.enumeration_budget);
      const double s_local = local_root(gamma);
      std::vector<std::size_t> order(gamma.selected.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t c) { return gamma.selected[a] < gamma.selected[c]; });
      for (std::size_t i : order) {
        const Word& w = gamma.selected[i];
        int cur = p;
        for (int j = 0; j + 1 < m; ++j) {
          int c = child_with_symbol(tree, cur, w[static_cast<std::size_t>(j)]);
          if (c < 0) {
            add_node(tree, make_node(system, tree, cur, w[static_cast<std::size_t>(j)],
                                     NodeRole::interior, generation));
            c = static_cast<int>(tree.nodes.size()) - 1;
          }
          cur = c;
        }
        CantorNode node = make_node(system, tree, cur, w.back(), NodeRole::block, generation);
        node.block_parent = p;
        node.log_weight = gamma.log_weights[i];
        node.s_local = s_local;
        add_node(tree, std::move(node));
        next.push_back(static_cast<int>(tree.nodes.size()) - 1);
      }
      tree.selections.push_back(std::move(gamma));
    }
    frontier = std::move(next);
  }
  return frontier;
}

CantorTree make_tree(const IfsSystem& system, const Potential& pot, const CantorParams& params) {
  if (params.m < 1) throw ContractError("block length m must be >= 1");
  if (params.k_max < 0) throw ContractError("k_max must be >= 0");
  if (params.ell.empty()) throw ContractError("block schedule must be nonempty");
  for (int l : params.ell) {
    if (l < 1) throw ContractError("blocks per generation must be >= 1");
  }
  pot.validate(system);
  check_budget(system, params.m, params.enumeration_budget);
  CantorTree tree;
  tree.params = params;
  tree.system = system.descriptor();
  tree.potential = pot.descriptor();
  tree.s_target = params.s_target
                      ? *params.s_target
                      : bowen_root(system, pot, params.m, params.tol,
                                   {params.enumeration_budget, 1, false})
                            .s;
  tree.distortion = system.distortion();
  tree.eta_m = system.eta_m(params.m, params.enumeration_budget);
  tree.rho = system.rho();
  tree.sup_f = pot.sup_norm(system);
  CantorNode root;
  root.role = NodeRole::root;
  root.generation = 0;
  tree.nodes.push_back(root);
  return tree;
}

int ell_for(const CantorParams& p, int k) {
  return p.ell[std::min(static_cast<std::size_t>(k - 1), p.ell.size() - 1)];
}

double t_upper_bound(const CantorTree& tree, int n) {
  return (n * tree.sup_f + std::log(tree.distortion)) / (-std::log(tree.rho)) + 1.0;
}

void compute_flags(const IfsSystem& system, const Potential& pot, CantorTree& tree) {
  auto& f = tree.flags;
  const auto& p = tree.params;
  const double eps = p.eps;
  const double K = tree.distortion;
  const double log_rho = std::log(tree.rho);

  double var_sum = 0.0;
  for (int j = 1; j <= p.m; ++j) {
    var_sum += variation_bound(system, pot, j, p.enumeration_budget).bound;
  }
  f.ff4_bound = var_sum;
  f.ff4 = var_sum <= eps * p.m;

  if (p.s_reference) {
    f.s_reference = *p.s_reference;
  } else if (word_count(system.alphabet_size(), 2 * p.m) <= p.enumeration_budget) {
    const double s2 =
        bowen_root(system, pot, 2 * p.m, p.tol, {p.enumeration_budget, 1, false}).s;
    f.s_reference = 2.0 * s2 - tree.s_target;
  } else {
    f.s_reference = tree.s_target;
  }
  f.ff3 = std::abs(tree.s_target - f.s_reference) < eps;

  const PartitionSums sums(system, pot, p.m, {p.enumeration_budget, 1, false});
  f.ff3bis_lhs = std::exp(sums.max_log_weight() * 4.0 * eps / (-log_rho));
  f.ff3bis_rhs = std::exp(-2.0 * std::log(K) - 3.0 * p.m * eps);
  f.ff3bis = f.ff3bis_lhs <= f.ff3bis_rhs;
  f.ff10 = p.m * eps >= 2.0 * std::log(K);

  f.n0 = 1;
  while ((1.0 / (2.0 * K)) * std::pow(system.eta(), -f.n0) < 2.0 && f.n0 < 10000) ++f.n0;
  const int m1 = ell_for(p, 1) * p.m;
  f.level1 = m1 >= f.n0 + 1 && f.n0 + tree.sup_f <= m1 * eps;
}

}  // namespace

GammaSelection select_gamma(const IfsSystem& system, const Potential& pot, int m, WordView v,
                            double s_target, std::uint64_t budget) {
  if (m < 1) throw ContractError("selection depth m must be >= 1");
  if (!(s_target >= 0.0)) throw ContractError("s_target must be >= 0");
  check_budget(system, m, budget);
  system.validate_word(v);

  GammaSelection g;
  g.parent.assign(v.begin(), v.end());
  g.m = m;
  g.s_target = s_target;
  g.sum_floor = 1.0 / (33.0 * system.distortion());

  const bool exact = system.is_projective();
  std::vector<Candidate> cands;
  cands.reserve(static_cast<std::size_t>(word_count(system.alphabet_size(), m)));
  ProjectiveMap<Rational> ev;
  if (exact) ev = system.exact_word_map(v);
  Rational min_diam_exact = -1;
  enumerate_cylinders(
      system, m,
      [&](const CylinderRecord& r) {
        Candidate c;
        c.word = r.word;
        c.log_weight = std::log(r.derivative) - birkhoff_sum(system, pot, r);
        if (exact) {
          const auto ew = system.exact_word_map(r.word);
          const Rational d = ew.image_of_unit().length();
          if (min_diam_exact < 0 || d < min_diam_exact) min_diam_exact = d;
          c.exact = (ev * ew).image_of_unit();
          c.interval = {to_double(c.exact.lo), to_double(c.exact.hi)};
        } else {
          Word full(v.begin(), v.end());
          full.insert(full.end(), r.word.begin(), r.word.end());
          c.interval = system.image(full);
        }
        cands.push_back(std::move(c));
      },
      {budget});
  g.candidates = cands.size();

  Rational floor_exact = 0;
  if (exact) {
    floor_exact = min_diam_exact * ev.image_of_unit().length();
    g.separation_floor = to_double(floor_exact);
  } else {
    g.separation_floor = system.eta_m(m, budget) * (v.empty() ? 1.0 : system.image(v).length());
  }

  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s_target * cands[a].log_weight > s_target * cands[b].log_weight;
  });

  // Admitted cylinders keyed by left endpoint; siblings are interior-disjoint,
  // so the nearest admitted neighbours on each side decide admission.
  std::map<double, std::size_t> admitted;
  auto far_enough = [&](std::size_t a, std::size_t b) {
    if (exact) return gap(cands[a].exact, cands[b].exact) > floor_exact;
    return gap(cands[a].interval, cands[b].interval) > g.separation_floor;
  };
  for (std::size_t i : order) {
    const auto it = admitted.lower_bound(cands[i].interval.lo);
    bool ok = true;
    if (it != admitted.end() && !far_enough(i, it->second)) ok = false;
    if (ok && it != admitted.begin() && !far_enough(i, std::prev(it)->second)) ok = false;
    if (ok && it != admitted.end() && it->first == cands[i].interval.lo) ok = false;
    if (!ok) continue;
    admitted.emplace(cands[i].interval.lo, i);
    g.selected.push_back(cands[i].word);
    g.log_weights.push_back(cands[i].log_weight);
    g.intervals.push_back(cands[i].interval);
    g.achieved_sum += std::exp(s_target * cands[i].log_weight);
  }
  if (g.achieved_sum < g.sum_floor) {
    throw InvariantViolation("separated selection sum " + std::to_string(g.achieved_sum) +
                             " below 1/(33K) = " + std::to_string(g.sum_floor));
  }
  return g;
}

double local_root(const GammaSelection& gamma, double tol) {
  if (gamma.selected.empty()) throw ContractError("local root needs a nonempty selection");
  if (gamma.selected.size() == 1) return 0.0;
  const PartitionSums sums(gamma.m, gamma.log_weights, 1);
  return solve_bowen(sums, tol, std::max(1.0, 2.0 * gamma.s_target)).s;
}

CantorTree build_block_tree(const IfsSystem& system, const Potential& pot, int m, int blocks,
                            std::optional<double> s_target, std::uint64_t node_budget,
                            std::uint64_t enumeration_budget) {
  CantorParams params;
  params.m = m;
  params.k_max = 1;
  params.ell = {blocks};
  params.node_budget = node_budget;
  params.enumeration_budget = enumeration_budget;
  params.s_target = s_target;
  CantorTree tree = make_tree(system, pot, params);
  tree.suffixes = false;
  tree.leaves = grow_blocks(system, pot, tree, 0, blocks, 1);
  for (int leaf : tree.leaves) tree.nodes[static_cast<std::size_t>(leaf)].generation_leaf = true;
  compute_flags(system, pot, tree);
  return tree;
}

CantorTree build_levels(const IfsSystem& system, const Potential& pot,
                        const CantorParams& params) {
  if (!pot.strictly_positive(system)) {
    throw ContractError("the leveled construction needs a strictly positive potential");
  }
  CantorTree tree = make_tree(system, pot, params);
  compute_flags(system, pot, tree);
  std::vector<int> frontier{0};
  int previous_max_depth = 0;
  for (int k = 1; k <= params.k_max; ++k) {
    const int m_k = ell_for(params, k) * params.m;
    if (k >= 2) {
      const double nt = previous_max_depth;
      tree.flags.ff9.push_back(static_cast<double>(m_k) / k >= nt &&
                               nt * (1.0 + tree.sup_f) <= m_k * params.eps);
    }
    std::vector<int> next;
    for (int leaf : frontier) {
      const auto ends = grow_blocks(system, pot, tree, leaf, ell_for(params, k), k);
      for (int e : ends) {
        const Word w = tree.nodes[static_cast<std::size_t>(e)].word;
        const auto witness = witness_cylinder(system, pot, w);
        const double bound = t_upper_bound(tree, static_cast<int>(w.size()));
        if (witness.t > bound + 1e-9) {
          throw InvariantViolation("return depth " + std::to_string(witness.t) +
                                   " exceeds the a-priori bound " + std::to_string(bound));
        }
        int cur = e;
        for (std::size_t j = 0; j < witness.suffix.size(); ++j) {
          add_node(tree, make_node(system, tree, cur, witness.suffix[j], NodeRole::suffix, k));
          cur = static_cast<int>(tree.nodes.size()) - 1;
        }
        auto& end = tree.nodes[static_cast<std::size_t>(cur)];
        end.generation_leaf = true;
        end.t = witness.t;
        next.push_back(cur);
      }
    }
    previous_max_depth = 0;
    for (int n : next) {
      previous_max_depth = std::max(previous_max_depth, tree.nodes[static_cast<std::size_t>(n)].depth);
    }
    frontier = std::move(next);
  }
  tree.leaves = frontier;
  return tree;
}

std::vector<MeasureNode> assign_measure(CantorTree& tree) {
  auto& nodes = tree.nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto& n = nodes[i];
    switch (n.role) {
      case NodeRole::root:
        n.mass = 1.0;
        break;
      case NodeRole::block:
        n.mass = nodes[static_cast<std::size_t>(n.block_parent)].mass *
                 std::exp(n.s_local * n.log_weight);
        break;
      case NodeRole::suffix:
        n.mass = nodes[static_cast<std::size_t>(n.parent)].mass;
        break;
      case NodeRole::interior:
        n.mass = 0.0;
        break;
    }
  }
  for (std::size_t i = nodes.size(); i-- > 0;) {
    auto& n = nodes[i];
    if (n.role != NodeRole::interior) continue;
    n.mass = 0.0;
    for (int c : n.children) n.mass += nodes[static_cast<std::size_t>(c)].mass;
  }
  std::map<int, double> offspring;
  for (const auto& n : nodes) {
    if (n.role == NodeRole::block) offspring[n.block_parent] += n.mass;
  }
  for (const auto& [p, total] : offspring) {
    const double parent = nodes[static_cast<std::size_t>(p)].mass;
    const double residual = std::abs(total / parent - 1.0);
    if (residual > kConsistencyTol) {
      throw InvariantViolation("mass consistency residual " + std::to_string(residual) +
                               " at node " + format_word(nodes[static_cast<std::size_t>(p)].word));
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.children.empty() || n.role == NodeRole::interior) continue;
    double total = 0.0;
    for (int c : n.children) total += nodes[static_cast<std::size_t>(c)].mass;
    if (std::abs(total / n.mass - 1.0) > kConsistencyTol) {
      throw InvariantViolation("children masses do not sum to parent at " + format_word(n.word));
    }
  }
  tree.measured = true;
  std::vector<MeasureNode> out;
  out.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out.push_back({static_cast<int>(i), nodes[i].mass});
  return out;
}

TreeCheck check_tree(const IfsSystem& system, const Potential& pot, const CantorTree& tree) {
  TreeCheck out;
  const bool exact = system.is_projective();
  const auto& nodes = tree.nodes;

  // Separation, recomputed independently of the selection.
  out.min_separation_ratio = std::numeric_limits<double>::infinity();
  Rational eta_m_exact = -1;
  if (system.is_affine()) {
    Rational a = -1;
    for (Symbol i = 0; i < system.alphabet_size(); ++i) {
      const Rational s = abs(system.branch(i).exact_map().matrix()(0, 0));
      if (a < 0 || s < a) a = s;
    }
    eta_m_exact = 1;
    for (int j = 0; j < tree.params.m; ++j) eta_m_exact *= a;
  }
  for (const auto& g : tree.selections) {
    std::vector<std::size_t> idx(g.selected.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return g.intervals[a].lo < g.intervals[b].lo; });
    if (eta_m_exact >= 0) {
      const Rational floor =
          eta_m_exact * system.exact_word_map(g.parent).image_of_unit().length();
      std::vector<BasicInterval<Rational>> iv;
      for (std::size_t i : idx) {
        Word full = g.parent;
        full.insert(full.end(), g.selected[i].begin(), g.selected[i].end());
        iv.push_back(system.exact_word_map(full).image_of_unit());
      }
      for (std::size_t i = 1; i < iv.size(); ++i) {
        const Rational d = gap(iv[i - 1], iv[i]);
        if (!(d > floor)) out.separation = false;
        out.min_separation_ratio = std::min(out.min_separation_ratio, to_double(d / floor));
      }
    } else {
      for (std::size_t i = 1; i < idx.size(); ++i) {
        const double d = gap(g.intervals[idx[i - 1]], g.intervals[idx[i]]);
        if (!(d > g.separation_floor)) out.separation = false;
        out.min_separation_ratio = std::min(out.min_separation_ratio, d / g.separation_floor);
      }
    }
  }

  // Leaves of the final generation: pairwise disjoint with positive gaps.
  std::vector<int> leaves = tree.leaves;
  if (exact) {
    std::vector<BasicInterval<Rational>> iv;
    for (int l : leaves) iv.push_back(system.exact_word_map(nodes[static_cast<std::size_t>(l)].word).image_of_unit());
    std::sort(iv.begin(), iv.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < iv.size(); ++i) {
      if (!(iv[i].lo > iv[i - 1].hi)) out.disjoint_leaves = false;
    }
  } else {
    std::vector<Interval> iv;
    for (int l : leaves) iv.push_back(nodes[static_cast<std::size_t>(l)].interval);
    std::sort(iv.begin(), iv.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < iv.size(); ++i) {
      if (!(iv[i].lo > iv[i - 1].hi)) out.disjoint_leaves = false;
    }
  }

  // Leaves inside J_n(w^{(k)}) and the return-depth bound.
  if (tree.suffixes) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      if (!n.generation_leaf || n.role != NodeRole::suffix) continue;
      int anchor = static_cast<int>(i);
      for (int j = 0; j < n.t; ++j) anchor = nodes[static_cast<std::size_t>(anchor)].parent;
      const Word& wk = nodes[static_cast<std::size_t>(anchor)].word;
      if (n.t > t_upper_bound(tree, static_cast<int>(wk.size())) + 1e-9) out.t_bound = false;
      if (system.is_affine()) {
        const auto jn = jn_exact_interval(system, pot, wk);
        const auto leaf = system.exact_word_map(n.word).image_of_unit();
        if (jn.empty || !jn.interval.contains(leaf)) out.leaf_inclusion = false;
      }
    }
    if (!system.is_affine()) {
      out.notes.push_back("leaf inclusion verified pointwise during construction");
    }
  }

  // Local roots: 0 <= s_m - s_{m,v}, and the C eps bound when ff3bis holds.
  const double eps = tree.params.eps;
  const double K = tree.distortion;
  const double log_eta_tilde = -std::log(33.0 * K);
  const double c_eps = eps * 4.0 * log_eta_tilde /
                       (-std::log(tree.rho) * (-2.0 * std::log(K) - 3.0 * tree.params.m * eps));
  bool gap_ok = true;
  for (const auto& n : nodes) {
    if (n.role != NodeRole::block) continue;
    const double d = tree.s_target - n.s_local;
    if (d < -1e-12) out.local_root_order = false;
    if (d > c_eps + 1e-12) gap_ok = false;
  }
  if (tree.flags.ff3bis) {
    out.local_root_gap = gap_ok;
  } else {
    out.notes.push_back("ff3bis fails at this m; local-root gap bound skipped");
  }

  // Diameter lower bound along each leaf path.
  if (tree.flags.ff3bis && tree.flags.ff10 && tree.suffixes) {
    const double power = 1.0 + 4.0 * eps / (-std::log(tree.rho));
    bool ok = true;
    for (int l : leaves) {
      double log_prod = 0.0;
      for (int c = l; c >= 0; c = nodes[static_cast<std::size_t>(c)].parent) {
        if (nodes[static_cast<std::size_t>(c)].role == NodeRole::block) {
          log_prod += nodes[static_cast<std::size_t>(c)].log_weight;
        }
      }
      if (std::log(nodes[static_cast<std::size_t>(l)].interval.length()) < power * log_prod) ok = false;
    }
    out.diameter_bound = ok;
  } else {
    out.notes.push_back("diameter lower bound skipped (ff3bis/ff10 fail or no suffixes)");
  }
  return out;
}

HolderReport holder_check(const CantorTree& tree, double s_eps, int start_depth) {
  if (!tree.measured) throw ContractError("holder check needs assign_measure first");
  if (!(s_eps > 0.0)) throw ContractError("s_eps must be positive");
  HolderReport rep;
  rep.s_eps = s_eps;
  rep.start_depth = start_depth;
  rep.min_exponent = std::numeric_limits<double>::infinity();
  rep.max_exponent = -std::numeric_limits<double>::infinity();
  const auto& nodes = tree.nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    const double diam = n.interval.length();
    if (n.mass <= 0.0) continue;
    rep.M = std::max(rep.M, n.mass / std::pow(diam, s_eps));
    if (n.depth == 0 || !(diam < 1.0)) continue;
    HolderRow row{static_cast<int>(i), n.depth, diam, n.mass, std::log(n.mass) / std::log(diam)};
    if (n.depth >= start_depth) {
      rep.min_exponent = std::min(rep.min_exponent, row.local_exponent);
      rep.max_exponent = std::max(rep.max_exponent, row.local_exponent);
    }
    rep.rows.push_back(row);
  }
  rep.passes = std::isfinite(rep.M) && rep.min_exponent >= s_eps;

  // Balls around leaf representatives, radii taken from ancestor diameters.
  std::vector<int> leaves = tree.leaves;
  std::sort(leaves.begin(), leaves.end(), [&](int a, int b) {
    return nodes[static_cast<std::size_t>(a)].interval.lo < nodes[static_cast<std::size_t>(b)].interval.lo;
  });
  std::vector<double> los;
  std::vector<double> prefix{0.0};
  for (int l : leaves) {
    los.push_back(nodes[static_cast<std::size_t>(l)].interval.lo);
    prefix.push_back(prefix.back() + nodes[static_cast<std::size_t>(l)].mass);
  }
  const std::size_t stride = std::max<std::size_t>(1, leaves.size() / kMaxBallCentres);
  for (std::size_t li = 0; li < leaves.size(); li += stride) {
    const auto& leaf = nodes[static_cast<std::size_t>(leaves[li])];
    const double x = leaf.interval.midpoint();
    for (int c = leaves[li]; c >= 0; c = nodes[static_cast<std::size_t>(c)].parent) {
      const double r = nodes[static_cast<std::size_t>(c)].interval.length();
      if (!(r > 0.0)) continue;
      // Leaves meeting [x - r, x + r].
      const auto hi = std::upper_bound(los.begin(), los.end(), x + r) - los.begin();
      auto lo = std::lower_bound(los.begin(), los.end(), x - r) - los.begin();
      if (lo > 0 && nodes[static_cast<std::size_t>(leaves[static_cast<std::size_t>(lo - 1)])].interval.hi >= x - r) --lo;
      const double mass = prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)];
      rep.ball_M = std::max(rep.ball_M, mass / std::pow(2.0 * r, s_eps));
      ++rep.balls;
    }
  }
  return rep;
}

nlohmann::ordered_json to_json(const CantorTree& t) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["system"] = t.system;
  j["potential"] = t.potential;
  j["params"] = {{"m", t.params.m},
                 {"eps", t.params.eps},
                 {"k_max", t.params.k_max},
                 {"ell", t.params.ell},
                 {"node_budget", t.params.node_budget},
                 {"enumeration_budget", t.params.enumeration_budget},
                 {"suffixes", t.suffixes}};
  j["s_target"] = t.s_target;
  j["K"] = t.distortion;
  j["eta_m"] = t.eta_m;
  j["rho"] = t.rho;
  ordered_json ff9 = ordered_json::array();
  for (bool b : t.flags.ff9) ff9.push_back(b);
  j["flags"] = {{"ff4", t.flags.ff4},
                {"ff4_bound", t.flags.ff4_bound},
                {"ff3", t.flags.ff3},
                {"s_reference", t.flags.s_reference},
                {"ff3bis", t.flags.ff3bis},
                {"ff3bis_lhs", t.flags.ff3bis_lhs},
                {"ff3bis_rhs", t.flags.ff3bis_rhs},
                {"ff10", t.flags.ff10},
                {"ff9", ff9},
                {"level1", t.flags.level1},
                {"n0", t.flags.n0}};
  ordered_json nodes = ordered_json::array();
  for (const auto& n : t.nodes) {
    const char* role = n.role == NodeRole::root      ? "root"
                       : n.role == NodeRole::block   ? "block"
                       : n.role == NodeRole::suffix  ? "suffix"
                                                     : "interior";
    nodes.push_back({{"word", n.word},
                     {"depth", n.depth},
                     {"interval", {n.interval.lo, n.interval.hi}},
                     {"mass", n.mass},
                     {"s_local", n.s_local},
                     {"flags",
                      {{"role", role},
                       {"generation", n.generation},
                       {"leaf", n.generation_leaf},
                       {"t", n.t}}}});
  }
  j["nodes"] = nodes;
  return j;
}

nlohmann::ordered_json to_json(const TreeCheck& c) {
  using nlohmann::ordered_json;
  auto opt = [](const std::optional<bool>& b) { return b ? ordered_json(*b) : ordered_json(nullptr); };
  return {{"separation", c.separation},
          {"min_separation_ratio",
           std::isfinite(c.min_separation_ratio) ? ordered_json(c.min_separation_ratio)
                                                 : ordered_json(nullptr)},
          {"disjoint_leaves", c.disjoint_leaves},
          {"leaf_inclusion", c.leaf_inclusion},
          {"t_bound", c.t_bound},
          {"local_root_order", c.local_root_order},
          {"local_root_gap", opt(c.local_root_gap)},
          {"diameter_bound", opt(c.diameter_bound)},
          {"notes", c.notes}};
}

nlohmann::ordered_json to_json(const HolderReport& r) {
  using nlohmann::ordered_json;
  auto num = [](double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); };
  return {{"s_eps", r.s_eps},
          {"start_depth", r.start_depth},
          {"M", num(r.M)},
          {"min_exponent", num(r.min_exponent)},
          {"max_exponent", num(r.max_exponent)},
          {"passes", r.passes},
          {"ball_M", num(r.ball_M)},
          {"balls", r.balls}};
}

std::string to_csv(const HolderReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "depth,diameter,mass,local_exponent\n";
  for (const auto& row : r.rows) {
    os << row.depth << ',' << row.diameter << ',' << row.mass << ',' << row.local_exponent << '\n';
  }
  return os.str();
}

}  // namespace recurdim
