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

#include "recurdim/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "recurdim/error.hpp"

namespace recurdim {
namespace {

constexpr int kMaxReturnDepth = 4096;
constexpr double kCriticalSlack = 1e-9;

void check_radius(double r) {
  if (!(r > 0.0) || !(r <= 1.0)) {
    throw ContractError("recurrence radius must lie in (0, 1], got " + std::to_string(r));
  }
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

std::string real(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

nlohmann::ordered_json word_json(WordView w) { return Word(w.begin(), w.end()); }

}  // namespace

int return_depth(const IfsSystem& system, WordView word, double r) {
  if (word.empty()) throw ContractError("return depth needs a nonempty word");
  check_radius(r);
  system.validate_word(word);
  ProjectiveMap<double> map;
  Word prefix;
  for (int t = 1; t <= kMaxReturnDepth; ++t) {
    const Symbol s = word[static_cast<std::size_t>(t - 1) % word.size()];
    double diameter = 0.0;
    if (system.is_projective()) {
      map = map * system.branch(s).map();
      diameter = map.image_of_unit().length();
    } else {
      prefix.push_back(s);
      diameter = system.image(prefix).length();
    }
    if (diameter < r) return t;
  }
  throw ContractError("radius too small: no return depth below " +
                      std::to_string(kMaxReturnDepth));
}

int return_depth(const IfsSystem& system, WordView word, const Rational& r) {
  if (word.empty()) throw ContractError("return depth needs a nonempty word");
  if (!system.is_projective()) throw ContractError("exact return depth needs a projective system");
  if (r <= 0 || r > 1) throw ContractError("recurrence radius must lie in (0, 1]");
  system.validate_word(word);
  ProjectiveMap<Rational> map;
  for (int t = 1; t <= kMaxReturnDepth; ++t) {
    map = map * system.branch(word[static_cast<std::size_t>(t - 1) % word.size()]).exact_map();
    if (map.image_of_unit().length() < r) return t;
  }
  throw ContractError("radius too small: no return depth below " +
                      std::to_string(kMaxReturnDepth));
}

RecurrenceWitness witness_for_radius(const IfsSystem& system, WordView word, double r,
                                     std::optional<Rational> exact_r) {
  if (word.empty()) throw ContractError("witness needs a nonempty word");
  RecurrenceWitness w;
  w.word.assign(word.begin(), word.end());
  w.n = static_cast<int>(word.size());
  w.radius = r;
  w.exact_radius = exact_r.has_value();
  if (system.is_projective()) {
    w.t = return_depth(system, word, exact_r ? *exact_r : exact_from_double(r));
  } else {
    w.t = return_depth(system, word, r);
  }
  w.suffix = periodic_prefix(word, static_cast<std::size_t>(w.t));
  Word full = w.word;
  full.insert(full.end(), w.suffix.begin(), w.suffix.end());
  w.interval = system.image(full);

  if (system.is_projective()) {
    const Rational rr = exact_r ? *exact_r : exact_from_double(r);
    const auto phi = system.exact_word_map(full);
    const auto tn = system.exact_word_map(word).inverse();
    const auto box = phi.image_of_unit();
    for (const Rational& x : {box.lo, box.hi, box.midpoint()}) {
      const Rational d = abs(tn(x) - x);
      w.max_displacement = std::max(w.max_displacement, to_double(d));
      if (!(d < rr)) {
        throw InvariantViolation("witness point violates |T^n x - x| < r for word " +
                                 format_word(word));
      }
    }
  } else {
    constexpr double kSlack = 1e-12;
    for (double x : {w.interval.lo, w.interval.hi, w.interval.midpoint()}) {
      const double d = std::abs(system.inverse_apply(word, x) - x);
      w.max_displacement = std::max(w.max_displacement, d);
      if (!(d < r + kSlack)) {
        throw InvariantViolation("witness point violates |T^n x - x| < r for word " +
                                 format_word(word));
      }
    }
  }
  double base = system.image(word).length();
  double length = w.interval.length();
  if (system.is_projective()) {
    base = to_double(system.exact_word_map(word).image_of_unit().length());
    length = to_double(system.exact_word_map(full).image_of_unit().length());
  }
  w.lower_bound = system.eta() * r * base / system.distortion();
  w.lower_bound_holds = length >= w.lower_bound * (1.0 - 1e-12);
  return w;
}

RecurrenceWitness witness_cylinder(const IfsSystem& system, const Potential& pot, WordView word) {
  if (word.empty()) throw ContractError("witness needs a nonempty word");
  pot.validate(system);
  const auto record = cylinder_record(system, word);
  const auto exact = exact_recurrence_radius(system, pot, word);
  const double r = exact ? to_double(*exact) : recurrence_radius(system, pot, record);
  return witness_for_radius(system, word, r, exact);
}

template <typename Scalar>
JnInterval<Scalar> jn_interval_for_radius(const IfsSystem& system, WordView word,
                                          const Scalar& r) {
  if (!system.is_affine()) throw ContractError("exact J_n needs an affine system");
  if (word.empty()) throw ContractError("J_n needs a nonempty word");
  JnInterval<Scalar> out;
  if (!(r > Scalar(0))) return out;
  ProjectiveMap<Scalar> map;
  if constexpr (std::is_same_v<Scalar, double>) {
    map = system.word_map(word);
  } else {
    map = system.exact_word_map(word).template cast<Scalar>();
  }
  const Scalar a = map.matrix()(0, 0) / map.matrix()(1, 1);
  const Scalar c = map.matrix()(0, 1) / map.matrix()(1, 1);
  // T^n x = sigma x - sigma c, so T^n x - x = (sigma - 1) x - sigma c.
  const Scalar sigma = Scalar(1) / a;
  const Scalar k = sigma - Scalar(1);
  const Scalar shift = sigma * c;
  Scalar lo = (shift - r) / k;
  Scalar hi = (shift + r) / k;
  if (hi < lo) std::swap(lo, hi);
  const auto cyl = map.image_of_unit();
  if (cyl.lo > lo) lo = cyl.lo;
  if (cyl.hi < hi) hi = cyl.hi;
  if (!(lo < hi)) return out;
  out.interval = {lo, hi};
  out.empty = false;
  return out;
}

template JnInterval<double> jn_interval_for_radius<double>(const IfsSystem&, WordView,
                                                           const double&);
template JnInterval<Rational> jn_interval_for_radius<Rational>(const IfsSystem&, WordView,
                                                               const Rational&);

JnInterval<Rational> jn_exact_interval(const IfsSystem& system, const Potential& pot,
                                       WordView word) {
  if (!system.is_affine()) throw ContractError("exact J_n needs an affine system");
  pot.validate(system);
  const auto exact = exact_recurrence_radius(system, pot, word);
  const Rational r = exact ? *exact
                           : exact_from_double(
                                 recurrence_radius(system, pot, cylinder_record(system, word)));
  return jn_interval_for_radius<Rational>(system, word, r);
}

CoveringReport covering_report(const IfsSystem& system, const Potential& pot, int n_min,
                               int n_max, std::vector<double> s_grid,
                               const ThermoOptions& options) {
  if (n_min < 1 || n_max < n_min) throw ContractError("covering report needs 1 <= N <= M");
  if (s_grid.empty()) throw ContractError("covering report needs a nonempty s grid");
  for (double s : s_grid) {
    if (!(s >= 0.0)) throw ContractError("covering exponents must be >= 0");
  }
  std::uint64_t total = 0;
  for (int n = n_min; n <= n_max; ++n) {
    const std::uint64_t c = word_count(system.alphabet_size(), n);
    total = (c > options.budget || total + c > options.budget) ? options.budget + 1 : total + c;
  }
  if (total > options.budget) {
    throw BudgetExceeded("covering depths " + std::to_string(n_min) + ".." +
                         std::to_string(n_max) + " exceed budget " +
                         std::to_string(options.budget));
  }
  pot.validate(system);

  CoveringReport rep;
  rep.system = system.descriptor();
  rep.potential = pot.descriptor();
  rep.n_min = n_min;
  rep.n_max = n_max;
  rep.s_grid = s_grid;
  rep.distortion = system.distortion();
  rep.budget = options.budget;

  const double log4k = std::log(4.0 * rep.distortion);
  const double log2k = std::log(2.0 * rep.distortion);
  std::vector<double> partial(s_grid.size(), -std::numeric_limits<double>::infinity());
  std::optional<PartitionSums> last;
  std::optional<PartitionSums> previous;
  for (int n = n_min; n <= n_max; ++n) {
    PartitionSums sums(system, pot, n, options);
    rep.workers = sums.workers();
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
      const double s = s_grid[i];
      const double ls = sums.log_sum(s);
      CoveringRow row{n, sums.size(), s, s * log4k + ls, s * log2k + ls};
      partial[i] = log_add(partial[i], row.log_contribution);
      rep.rows.push_back(row);
    }
    previous = std::move(last);
    last.emplace(std::move(sums));
  }

  auto growth = [&](double s) {
    if (previous) return last->log_sum(s) - previous->log_sum(s);
    return last->log_sum(s) / last->depth();
  };
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    CoveringTrendRow row;
    row.s = s_grid[i];
    row.growth = growth(row.s);
    row.trend = row.growth > kCriticalSlack    ? CoveringTrend::growing
                : row.growth < -kCriticalSlack ? CoveringTrend::decaying
                                               : CoveringTrend::critical;
    row.log_partial_sum = partial[i];
    rep.trends.push_back(row);
  }
  if (previous) {
    double lo = 0.0;
    double hi = default_s_max(system, pot);
    while (growth(hi) > 0.0 && hi < 64.0) hi *= 2.0;
    if (growth(lo) > 0.0 && growth(hi) <= 0.0) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (growth(mid) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      rep.critical_exponent = 0.5 * (lo + hi);
    }
  }
  return rep;
}

nlohmann::ordered_json to_json(const CoveringReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["system"] = r.system;
  j["potential"] = r.potential;
  j["config"] = {{"n_min", r.n_min}, {"n_max", r.n_max}, {"s_grid", r.s_grid},
                 {"budget", r.budget}, {"workers", r.workers}};
  j["K"] = r.distortion;
  j["constants"] = {{"bound", "4K"}, {"alternate", "2K"}};
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"word_count", row.word_count},
                    {"s", row.s},
                    {"log_contribution", row.log_contribution},
                    {"log_contribution_2k", row.log_contribution_2k}});
  }
  j["rows"] = rows;
  ordered_json trends = ordered_json::array();
  for (const auto& t : r.trends) {
    const char* name = t.trend == CoveringTrend::growing    ? "growing"
                       : t.trend == CoveringTrend::decaying ? "decaying"
                                                            : "critical";
    trends.push_back({{"s", t.s},
                      {"growth", t.growth},
                      {"trend", name},
                      {"log_partial_sum", t.log_partial_sum}});
  }
  j["trends"] = trends;
  j["critical_exponent"] =
      r.critical_exponent ? ordered_json(*r.critical_exponent) : ordered_json(nullptr);
  return j;
}

std::string to_csv(const CoveringReport& r) {
  std::ostringstream os;
  os << "n,word_count,s,log_contribution\n";
  for (const auto& row : r.rows) {
    os << row.n << ',' << row.word_count << ',' << real(row.s) << ','
       << real(row.log_contribution) << '\n';
  }
  return os.str();
}

nlohmann::ordered_json to_json(const RecurrenceWitness& w) {
  return {{"word", word_json(w.word)},
          {"n", w.n},
          {"t", w.t},
          {"suffix", word_json(w.suffix)},
          {"interval", {w.interval.lo, w.interval.hi}},
          {"radius", w.radius},
          {"exact_radius", w.exact_radius},
          {"lower_bound", w.lower_bound},
          {"lower_bound_holds", w.lower_bound_holds},
          {"max_displacement", w.max_displacement}};
}

}  // namespace recurdim
