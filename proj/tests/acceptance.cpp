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


#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "recurdim/cantor.hpp"
#include "recurdim/error.hpp"
#include "recurdim/numtheory.hpp"
#include "recurdim/recurrence.hpp"
#include "recurdim/thermo.hpp"

using namespace recurdim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string show(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string show(long x) { return std::to_string(x); }
std::string show(int x) { return std::to_string(x); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Criterion 1.
Outcome badic_constant() {
  Outcome o;
  double worst = 0.0;
  double slowest = 0.0;
  for (int b : {2, 3, 5}) {
    const auto sys = build_system("badic:b=" + std::to_string(b));
    for (double t : {0.0, 0.5, 1.0, 3.0}) {
      const auto t0 = Clock::now();
      for (int n = 1; n <= 10; ++n) {
        const double s = bowen_root(sys, Potential::logderiv(t), n).s;
        worst = std::max(worst, std::abs(s - 1.0 / (1.0 + t)));
      }
      slowest = std::max(slowest, seconds_since(t0));
    }
  }
  o.pass = worst <= 1e-10 && slowest < 1.0;
  o.detail = "max |s_n - 1/(1+t)| = " + show(worst) + ", slowest case " +
             show(slowest) + " s";
  return o;
}

// Root of 1 + 2^{ts} = 2^{s(t+1)}.
double dyadic_oracle(double t) {
  if (t == 1.0) return std::log2((1.0 + std::sqrt(5.0)) / 2.0);
  return oracle::root_toms748(
      [t](double s) { return 1.0 + std::exp2(t * s) - std::exp2(s * (t + 1.0)); }, 1e-6, 1.0);
}

// Criterion 2.
Outcome dyadic_frequency() {
  Outcome o;
  const auto sys = build_system("badic:b=2");
  double worst = 0.0;
  double spread = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    const double expected = dyadic_oracle(t);
    std::vector<double> roots;
    for (int n : {1, 2, 4, 8, 12, 16}) {
      roots.push_back(bowen_root(sys, Potential::digit_indicator(t, 1), n).s);
      worst = std::max(worst, std::abs(roots.back() - expected));
    }
    const auto [lo, hi] = std::minmax_element(roots.begin(), roots.end());
    spread = std::max(spread, *hi - *lo);
  }
  o.pass = worst <= 1e-9 && spread <= 1e-10;
  o.detail = "max |s_n - oracle| = " + show(worst) + ", n-spread " +
             show(spread);
  return o;
}

// Criterion 3.
Outcome triadic_cantor() {
  Outcome o;
  const auto sys = build_system("cantor:b=3,digits=0|2");
  const double d = std::log(2.0) / std::log(3.0);
  double worst = 0.0;
  for (double t : {0.0, 1.0, 2.0}) {
    for (int n = 1; n <= 12; ++n) {
      worst = std::max(worst, std::abs(bowen_root(sys, Potential::logderiv(t), n).s - d / (1 + t)));
    }
  }
  const double mahler = bowen_root(sys, Potential::logderiv(1.0), 10).s;
  const double gap = std::abs(mahler - std::log(2.0) / (2.0 * std::log(3.0)));
  o.pass = worst <= 1e-10 && gap <= 1e-10;
  o.detail = "max |s_n - d/(1+t)| = " + show(worst) + ", t=1 gap " + show(gap);
  return o;
}

// Criterion 4.
Outcome cf_convergence() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto sys = build_system("cf:amax=2");
  const auto zero = Potential::constant(0.0);
  std::vector<std::pair<int, double>> roots;
  for (int n : {8, 10, 16, 20}) roots.push_back({n, bowen_root(sys, zero, n).s});
  const auto ex = bowen_extrapolate(roots);
  const double diff = std::abs(roots[2].second - roots[3].second);
  const double agree = ex.steps.size() >= 2
                           ? std::abs(ex.steps[ex.steps.size() - 1].value -
                                      ex.steps[ex.steps.size() - 2].value)
                           : INFINITY;
  const double elapsed = seconds_since(t0);
  o.pass = diff < 5e-4 && agree <= 1e-5 && elapsed < 60.0;
  o.detail = "|s16 - s20| = " + show(diff) + ", richardson agreement " +
             show(agree) + ", " + show(elapsed) + " s";
  return o;
}

Word random_word(oracle::Gen& g, const IfsSystem& sys, int max_depth) {
  const auto w = g.word(static_cast<int>(sys.alphabet_size()),
                        static_cast<int>(g.integer(1, max_depth)));
  return Word(w.begin(), w.end());
}

// Criterion 5.
Outcome witnesses() {
  Outcome o;
  oracle::Gen g(501);
  const std::vector<std::pair<const char*, double>> cases = {
      {"badic:b=2", 1.0},       {"badic:b=3", 0.5}, {"cantor:b=3,digits=0|2", 2.0},
      {"affine:[(1/4,0),(1/3,1/2),(1/8,7/8)]", 1.0}, {"cf:amax=2", 0.5}, {"cf:amax=4", 1.5}};
  int failures = 0;
  int total = 0;
  for (const auto& [desc, t] : cases) {
    const auto sys = build_system(desc);
    const auto pot = Potential::logderiv(t);
    for (int trial = 0; trial < 200; ++trial) {
      const Word w = random_word(g, sys, 8);
      ++total;
      try {
        const auto wit = witness_cylinder(sys, pot, w);
        Word full = w;
        full.insert(full.end(), wit.suffix.begin(), wit.suffix.end());
        const auto exact_r = exact_recurrence_radius(sys, pot, w);
        const Rational r = exact_r ? *exact_r : exact_from_double(wit.radius);
        const auto box = sys.exact_word_map(full).image_of_unit();
        const auto tn = sys.exact_word_map(w).inverse();
        bool ok = wit.lower_bound_holds;
        for (const Rational& x : {box.lo, box.midpoint(), box.hi}) {
          ok = ok && abs(tn(x) - x) < r;
        }
        if (!ok) ++failures;
      } catch (const Error&) {
        ++failures;
      }
    }
  }
  o.pass = failures == 0;
  o.detail = show(total - failures) + "/" + show(total) + " witnesses hold";
  return o;
}

// Criterion 6.
Outcome covering() {
  Outcome o;
  int bad = 0;
  long total = 0;
  double worst_gap = 0.0;
  for (const char* desc : {"badic:b=2", "badic:b=3", "cantor:b=3,digits=0|2",
                           "affine:[(1/4,0),(1/3,1/2),(1/8,7/8)]"}) {
    const auto sys = build_system(desc);
    const auto pot = Potential::logderiv(1.0);
    const Rational k4 = 4 * exact_from_double(sys.distortion());
    for (int n = 1; n <= 10; ++n) {
      enumerate_cylinders(sys, n, [&](const CylinderRecord& rec) {
        const auto jn = jn_exact_interval(sys, pot, rec.word);
        const Rational r = *exact_recurrence_radius(sys, pot, rec.word);
        const Rational d_inv = sys.exact_word_map(rec.word).image_of_unit().length();
        ++total;
        if (!(jn.length() <= k4 * d_inv * r)) ++bad;
      });
    }
    std::vector<double> grid;
    for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
    const auto rep = covering_report(sys, pot, 1, 10, grid);
    const double root = bowen_root(sys, pot, 10).s;
    const double gap = rep.critical_exponent ? std::abs(*rep.critical_exponent - root) : INFINITY;
    worst_gap = std::max(worst_gap, gap);
  }
  o.pass = bad == 0 && worst_gap <= 0.02;
  o.detail = show(total - bad) + "/" + show(total) +
             " J_n bounds hold, max critical exponent gap " + show(worst_gap);
  return o;
}

double max_measure_residual(const CantorTree& tree) {
  double worst = 0.0;
  for (const auto& n : tree.nodes) {
    if (n.children.empty() || n.mass == 0.0) continue;
    double s = 0.0;
    for (int c : n.children) s += tree.nodes[static_cast<std::size_t>(c)].mass;
    worst = std::max(worst, std::abs(s / n.mass - 1.0));
  }
  return worst;
}

// Criterion 7.
Outcome cantor_suite() {
  Outcome o;
  int selections = 0;
  int below = 0;
  double residual = 0.0;
  struct Case {
    const char* desc;
    double t;
    int m;
    std::vector<int> ell;
    int k_max;
  };
  const std::vector<Case> cases = {{"badic:b=2", 1.0, 2, {2}, 2},
                                   {"badic:b=3", 0.5, 2, {1}, 2},
                                   {"cantor:b=3,digits=0|2", 1.0, 3, {1}, 2},
                                   {"cf:amax=2", 1.0, 3, {1}, 2},
                                   {"cf:amax=3", 0.5, 2, {1}, 1}};
  try {
    for (const auto& c : cases) {
      const auto sys = build_system(c.desc);
      const auto pot = Potential::logderiv(c.t);
      CantorParams p;
      p.m = c.m;
      p.ell = c.ell;
      p.k_max = c.k_max;
      auto tree = build_levels(sys, pot, p);
      assign_measure(tree);
      for (const auto& sel : tree.selections) {
        ++selections;
        if (!(sel.achieved_sum >= sel.sum_floor)) ++below;
      }
      residual = std::max(residual, max_measure_residual(tree));
    }
  } catch (const Error& e) {
    o.pass = false;
    o.detail = std::string("error: ") + e.what();
    return o;
  }
  const auto b2 = build_system("badic:b=2");
  auto ref = build_block_tree(b2, Potential::constant(0.0), 2, 4);
  assign_measure(ref);
  residual = std::max(residual, max_measure_residual(ref));
  const auto pass = holder_check(ref, 0.45);
  const auto fail = holder_check(ref, 0.55);
  const bool exponent = std::abs(pass.min_exponent - 0.5) <= 1e-12;
  o.pass = below == 0 && residual <= 1e-12 && pass.passes && !fail.passes && exponent;
  o.detail = show(selections - below) + "/" + show(selections) +
             " selections above 1/(33K), measure residual " + show(residual) +
             ", holder 0.45 " + (pass.passes ? "passes" : "fails") + ", 0.55 " +
             (fail.passes ? "passes" : "fails") + ", exponent " + show(pass.min_exponent);
  return o;
}

// Criterion 8.
Outcome number_theory() {
  Outcome o;
  oracle::Gen g(801);
  int round_trip_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const long long q = g.integer(2, 1'000'000);
    long long p = g.integer(1, q - 1);
    while (std::gcd(p, q) != 1) p = g.integer(1, q - 1);
    const auto [a, b] = cf_expansions_of_rational(p, q);
    if (!(evaluate_cf(a) == Rational(p, q) && evaluate_cf(b) == Rational(p, q))) ++round_trip_bad;
  }
  int periodic_bad = 0;
  int surds = 0;
  int size_bad = 0;
  for (long long q = 1; q <= 200; ++q) {
    const auto aq = enumerate_Aq(q);
    if (static_cast<long long>(aq.members.size()) > 2 * q) ++size_bad;
    for (const auto& x : aq.members) {
      ++surds;
      CfDigits thrice;
      for (int k = 0; k < 3; ++k) thrice.insert(thrice.end(), x.period.begin(), x.period.end());
      if (surd_cf_digits(x, thrice.size()) != thrice || !(same_surd(x, periodic_surd(x.period)))) {
        ++periodic_bad;
      }
    }
  }
  int chains = 0;
  int chain_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    CfDigits w(static_cast<std::size_t>(g.integer(1, 7)));
    for (auto& d : w) d = g.integer(1, 4);
    if (w == CfDigits{1}) w[0] = 2;
    ++chains;
    try {
      if (!dtau_chain_check(w, g.real(2.0, 4.0), g.real(0.1, 1.0)).holds) ++chain_bad;
    } catch (const Error&) {
      ++chain_bad;
    }
  }
  o.pass = round_trip_bad == 0 && periodic_bad == 0 && size_bad == 0 && chain_bad == 0;
  o.detail = show(1000 - round_trip_bad) + "/1000 round trips, " +
             show(surds - periodic_bad) + "/" + show(surds) +
             " periodic surds, " + show(size_bad) + " oversized A_q, " +
             show(chains - chain_bad) + "/" + show(chains) + " chains hold";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"b-adic constant rate", badic_constant},
      {"dyadic digit frequency", dyadic_frequency},
      {"triadic cantor", triadic_cantor},
      {"continued fraction convergence", cf_convergence},
      {"recurrence witnesses", witnesses},
      {"covering bound", covering},
      {"cantor witness suite", cantor_suite},
      {"number theory", number_theory}};
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
