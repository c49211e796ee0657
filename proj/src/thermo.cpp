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

#include "recurdim/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "recurdim/error.hpp"
#include "recurdim/parallel.hpp"

namespace recurdim {
namespace {

struct Partial {
  double shift = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
};

Partial merge(const Partial& a, const Partial& b) {
  if (a.sum == 0.0) return b;
  if (b.sum == 0.0) return a;
  const double m = std::max(a.shift, b.shift);
  return {m, a.sum * std::exp(a.shift - m) + b.sum * std::exp(b.shift - m)};
}

constexpr std::size_t kSparse = 16;

int resolve_workers(int workers) { return workers > 0 ? workers : default_workers(); }

double record_log_weight(const IfsSystem& system, const Potential& pot, const CylinderRecord& r,
                         bool sup_weights) {
  const double s = birkhoff_sum(system, pot, r);
  if (!sup_weights) return std::log(r.derivative) - s;
  double sup_d = r.derivative;
  double inf_s = s;
  for (double z : {0.0, 1.0}) {
    sup_d = std::max(sup_d, std::abs(system.derivative(r.word, z)));
    inf_s = std::min(inf_s, birkhoff_sum_at(system, pot, r.word, z));
  }
  return std::log(sup_d) - inf_s;
}

}  // namespace

PartitionSums::PartitionSums(const IfsSystem& system, const Potential& pot, int n,
                             const ThermoOptions& options)
    : n_(n), workers_(resolve_workers(options.workers)) {
  if (n < 1) throw ContractError("partition sums need n >= 1");
  pot.validate(system);
  check_budget(system, n, options.budget);
  const std::size_t a = system.alphabet_size();
  const std::uint64_t total = word_count(a, n);
  log_weights_.assign(total, 0.0);

  int p = 0;
  while (p < n && word_count(a, p) < 256) ++p;
  const std::uint64_t tasks = word_count(a, p);
  const std::uint64_t per_task = word_count(a, n - p);
  parallel_for(tasks, workers_, [&](std::size_t task) {
    const Word prefix = word_from_rank(a, p, task);
    std::uint64_t pos = task * per_task;
    enumerate_cylinders_with_prefix(system, prefix, n, [&](const CylinderRecord& r) {
      log_weights_[pos++] = record_log_weight(system, pot, r, options.sup_weights);
    });
  });
  max_ = *std::max_element(log_weights_.begin(), log_weights_.end());
  compress();
}

PartitionSums::PartitionSums(int n, std::vector<double> log_weights, int workers)
    : n_(n), workers_(resolve_workers(workers)), log_weights_(std::move(log_weights)) {
  if (log_weights_.empty()) throw ContractError("partition sums need at least one weight");
  max_ = *std::max_element(log_weights_.begin(), log_weights_.end());
  compress();
}

void PartitionSums::compress() {
  const std::size_t count = log_weights_.size();
  if (count < 2 * kChunk) return;
  std::vector<double> sample(log_weights_.begin(), log_weights_.begin() + kChunk);
  std::sort(sample.begin(), sample.end());
  const auto distinct = static_cast<std::size_t>(
      std::unique(sample.begin(), sample.end()) - sample.begin());
  if (distinct * kSparse > kChunk) return;
  std::unordered_map<double, std::uint64_t> tally;
  for (double w : log_weights_) {
    ++tally[w];
    if (tally.size() * kSparse > count) return;
  }
  std::vector<std::pair<double, std::uint64_t>> sorted(tally.begin(), tally.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [w, c] : sorted) {
    levels_.push_back(w);
    log_counts_.push_back(std::log(static_cast<double>(c)));
  }
}

double PartitionSums::log_sum(double s) const {
  if (!levels_.empty()) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < levels_.size(); ++i) m = std::max(m, s * levels_[i] + log_counts_[i]);
    double acc = 0.0;
    for (std::size_t i = 0; i < levels_.size(); ++i) acc += std::exp(s * levels_[i] + log_counts_[i] - m);
    return m + std::log(acc);
  }
  const std::size_t count = log_weights_.size();
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<Partial> parts(chunks);
  auto chunk_sum = [&](std::size_t c) {
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(count, begin + kChunk);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = begin; i < end; ++i) m = std::max(m, s * log_weights_[i]);
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += std::exp(s * log_weights_[i] - m);
    parts[c] = {m, acc};
  };
  if (chunks > 1 && workers_ > 1) {
    parallel_for(chunks, workers_, chunk_sum);
  } else {
    for (std::size_t c = 0; c < chunks; ++c) chunk_sum(c);
  }
  for (std::size_t width = 1; width < chunks; width *= 2) {
    for (std::size_t i = 0; i + width < chunks; i += 2 * width) {
      parts[i] = merge(parts[i], parts[i + width]);
    }
  }
  return parts[0].shift + std::log(parts[0].sum);
}

PressureSample pressure_approx(const IfsSystem& system, const Potential& pot, double s, int n,
                               const ThermoOptions& options) {
  if (!(s >= 0.0)) throw ContractError("pressure needs s >= 0");
  const PartitionSums sums(system, pot, n, options);
  return {s, n, sums.log_sum(s) / n};
}

double default_s_max(const IfsSystem& system, const Potential& pot) {
  const double lr = -std::log(system.rho());
  const double v = 1.0 + 1.0 / (1.0 + pot.inf(system) / lr);
  return std::min(v, 4.0);
}

BowenRoot solve_bowen(const PartitionSums& sums, double tol, double s_max) {
  if (!(tol > 0.0)) throw ContractError("Bowen tolerance must be positive");
  if (!(s_max > 0.0)) throw ContractError("s_max must be positive");
  BowenRoot out;
  out.n = sums.depth();
  auto residual = [&](double s) { return std::abs(std::expm1(sums.log_sum(s))); };
  if (sums.size() == 1 && sums.max_log_weight() < 0.0) {
    out.s = 0.0;
    out.residual = residual(0.0);
    return out;
  }
  double lo = 0.0;
  double hi = s_max;
  if (!(sums.log_sum(lo) > 0.0)) throw BracketError("partition sum at s = 0 does not exceed 1");
  while (sums.log_sum(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1024.0) {
      throw BracketError("no sign change of the partition sum below s = 1024");
    }
  }
  double best = hi;
  double best_res = residual(hi);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++out.iterations;
    const double g = sums.log_sum(mid);
    const double res = std::abs(std::expm1(g));
    if (res < best_res || (res == best_res && mid < best)) {
      best = mid;
      best_res = res;
    }
    if (g == 0.0) break;
    if (g > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double res_lo = residual(lo);
  if (res_lo < best_res) {
    best = lo;
    best_res = res_lo;
  }
  if (best_res > tol) {
    throw BracketError("bisection stalled with residual " + std::to_string(best_res) +
                       " above tolerance");
  }
  out.s = best;
  out.residual = best_res;
  return out;
}

BowenRoot bowen_root(const IfsSystem& system, const Potential& pot, int n, double tol,
                     const ThermoOptions& options) {
  const PartitionSums sums(system, pot, n, options);
  return solve_bowen(sums, tol, default_s_max(system, pot));
}

Extrapolation bowen_extrapolate(std::vector<std::pair<int, double>> roots) {
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              roots.end());
  if (roots.size() < 2) throw ContractError("extrapolation needs at least two depths");
  std::map<int, double> by_n(roots.begin(), roots.end());
  Extrapolation out;
  for (const auto& [n, s] : roots) {
    const auto it = by_n.find(2 * n);
    if (it != by_n.end()) out.steps.push_back({n, 2 * n, 2.0 * it->second - s});
  }
  if (out.steps.empty()) throw ContractError("extrapolation needs a pair of depths (n, 2n)");
  for (std::size_t i = 1; i < roots.size(); ++i) {
    const auto [n1, s1] = roots[i - 1];
    const auto [n2, s2] = roots[i];
    out.two_point.push_back({n1, n2, (n2 * s2 - n1 * s1) / (n2 - n1)});
  }
  out.value = out.steps.back().value;
  return out;
}

BowenReport dimension_report(const IfsSystem& system, const Potential& pot,
                             const DimensionOptions& options) {
  if (options.depths.empty()) throw ContractError("depth schedule is empty");
  for (int n : options.depths) {
    if (n < 1) throw ContractError("depths must be >= 1");
    check_budget(system, n, options.thermo.budget);
  }
  pot.validate(system);
  BowenReport report;
  report.system = system.descriptor();
  report.potential = pot.descriptor();
  report.options = options;
  report.options.thermo.workers = resolve_workers(options.thermo.workers);
  std::sort(report.options.depths.begin(), report.options.depths.end());
  report.options.depths.erase(
      std::unique(report.options.depths.begin(), report.options.depths.end()),
      report.options.depths.end());
  report.s_max = default_s_max(system, pot);
  report.rho = system.rho();
  report.eta = system.eta();
  report.distortion = system.distortion();
  report.distortion_certified = system.distortion_certified();

  std::vector<std::pair<int, double>> roots;
  std::optional<PartitionSums> deepest;
  for (int n : report.options.depths) {
    PartitionSums sums(system, pot, n, report.options.thermo);
    report.samples.push_back(solve_bowen(sums, options.tol, report.s_max));
    roots.emplace_back(n, report.samples.back().s);
    if (n == report.options.depths.back()) deepest.emplace(std::move(sums));
  }
  report.extrapolation = bowen_extrapolate(roots);
  std::map<int, double> by_n(roots.begin(), roots.end());
  for (const auto& [n, s] : roots) {
    const auto it = by_n.find(2 * n);
    if (it != by_n.end()) report.gaps.push_back({n, 2 * n, std::abs(s - it->second)});
  }
  const double s = report.extrapolation.value;
  const int n = deepest->depth();
  const double lo = std::max(0.0, s - options.delta);
  const double hi = s + options.delta;
  report.below = {lo, n, deepest->log_sum(lo) / n};
  report.above = {hi, n, deepest->log_sum(hi) / n};
  constexpr double kSlack = 1e-9;
  report.bracket_ok = report.below.value >= -kSlack && report.above.value <= kSlack;
  return report;
}

nlohmann::ordered_json to_json(const BowenReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["system"] = r.system;
  j["potential"] = r.potential;
  j["config"] = {{"depths", r.options.depths},
                 {"tol", r.options.tol},
                 {"delta", r.options.delta},
                 {"budget", r.options.thermo.budget},
                 {"workers", r.options.thermo.workers},
                 {"weights", r.options.thermo.sup_weights ? "sup" : "representative"},
                 {"extrapolation", "richardson-doubling"}};
  j["constants"] = {{"rho", r.rho},
                    {"eta", r.eta},
                    {"K", r.distortion},
                    {"K_certified", r.distortion_certified},
                    {"s_max", r.s_max}};
  ordered_json samples = ordered_json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"n", s.n}, {"s_n", s.s}, {"residual", s.residual},
                       {"iterations", s.iterations}});
  }
  j["samples"] = samples;
  j["extrapolated"] = r.extrapolation.value;
  ordered_json steps = ordered_json::array();
  for (const auto& s : r.extrapolation.steps) {
    steps.push_back({{"n", s.n}, {"n2", s.n2}, {"value", s.value}});
  }
  j["richardson"] = steps;
  ordered_json two = ordered_json::array();
  for (const auto& s : r.extrapolation.two_point) {
    two.push_back({{"n", s.n}, {"n2", s.n2}, {"value", s.value}});
  }
  j["two_point"] = two;
  ordered_json gaps = ordered_json::array();
  for (const auto& g : r.gaps) gaps.push_back({{"n", g.n}, {"n2", g.n2}, {"gap", g.value}});
  j["gaps"] = gaps;
  j["pressure_bracket"] = ordered_json::array(
      {{{"s", r.below.s}, {"n", r.below.n}, {"P", r.below.value}},
       {{"s", r.above.s}, {"n", r.above.n}, {"P", r.above.value}}});
  j["bracket_ok"] = r.bracket_ok;
  return j;
}

}  // namespace recurdim
