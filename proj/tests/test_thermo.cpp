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

#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "oracles.hpp"
#include "recurdim/error.hpp"
#include "recurdim/thermo.hpp"

using namespace recurdim;

namespace {

// Partition function of the continued-fraction system with f = 0, summed
// directly over convergent denominators.
double cf_log_sum(int amax, int n, double s) {
  double total = 0.0;
  oracle::for_each_word(amax, n, [&](const std::vector<int>& w) {
    std::vector<long long> a;
    for (int x : w) a.push_back(x + 1);
    total += std::pow(oracle::cf_derivative(a, oracle::cf_fixed_point(a)), s);
  });
  return std::log(total);
}

// Largest real root of the monic polynomial with the given lower coefficients.
double companion_root(const std::vector<double>& c) {
  const auto d = static_cast<int>(c.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) m(i, d - 1) = -c[static_cast<std::size_t>(i)];
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  double best = -INFINITY;
  for (int i = 0; i < d; ++i) {
    if (std::abs(es.eigenvalues()[i].imag()) < 1e-12) best = std::max(best, es.eigenvalues()[i].real());
  }
  return best;
}

}  // namespace

TEST_CASE("pressure closed forms") {
  const auto b3 = build_system("badic:b=3");
  for (int n : {1, 3, 7}) {
    CHECK(std::abs(pressure_approx(b3, Potential::logderiv(1.0), 0.5, n).value) < 1e-14);
    const double s = 0.3;
    CHECK(pressure_approx(b3, Potential::logderiv(1.0), s, n).value ==
          doctest::Approx(std::log(3.0) * (1 - 2 * s)).epsilon(1e-13));
  }
  const auto b2 = build_system("badic:b=2");
  CHECK(std::abs(pressure_approx(b2, Potential::constant(0.0), 1.0, 5).value) < 1e-15);
  const auto dig = parse_potential("digitind:t=1,digit=0");
  for (double s : {0.1, 0.5, 0.9}) {
    const double expected = std::log(std::pow(2.0, -2.0 * s) * (1 + std::pow(2.0, s)));
    for (int n : {1, 4, 9}) {
      CHECK(pressure_approx(b2, dig, s, n).value == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("pressure is nonincreasing in s") {
  for (const char* d : {"cf:amax=3", "badic:b=2", "affine:[(0.2,0),(0.5,0.5)]"}) {
    const auto sys = build_system(d);
    for (const char* p : {"const:c=0", "logderiv:t=0.5", "const:c=0.3"}) {
      const PartitionSums sums(sys, parse_potential(p), 6);
      double prev = INFINITY;
      for (int i = 0; i <= 40; ++i) {
        const double v = sums.log_sum(i * 0.05);
        CHECK(v <= prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("bowen roots against closed forms") {
  const auto b2 = build_system("badic:b=2");
  for (int n : {1, 4, 9}) {
    CHECK(std::abs(bowen_root(b2, Potential::logderiv(1.0), n).s - 0.5) < 1e-12);
  }
  const auto c3 = build_system("cantor:b=3,digits=0|2");
  CHECK(std::abs(bowen_root(c3, Potential::logderiv(1.0), 6).s -
                 std::log(2.0) / (2 * std::log(3.0))) < 1e-12);
  const double golden = std::log2((1 + std::sqrt(5.0)) / 2);
  CHECK(std::abs(bowen_root(b2, parse_potential("digitind:t=1,digit=0"), 7).s - golden) < 1e-12);
  // 1 + y^2 = y^3 with y = 2^s.
  const double y = companion_root({-1.0, 0.0, -1.0});
  CHECK(std::abs(bowen_root(b2, parse_potential("digitind:t=2,digit=0"), 8).s - std::log2(y)) <
        1e-10);
}

TEST_CASE("bowen root on cf matches a toms748 oracle") {
  const auto cf = build_system("cf:amax=3");
  for (int n : {2, 4, 6}) {
    const double oracle_s = oracle::root_toms748([&](double s) { return cf_log_sum(3, n, s); },
                                                 0.0, 2.0);
    CHECK(bowen_root(cf, Potential::constant(0.0), n).s == doctest::Approx(oracle_s).epsilon(1e-10));
  }
}

TEST_CASE("residual within tolerance and s within cap") {
  for (const char* d : {"cf:amax=2", "badic:b=5", "cantor:b=4,digits=0|3"}) {
    const auto sys = build_system(d);
    for (const char* p : {"const:c=0", "logderiv:t=0.5", "const:c=0.1"}) {
      const auto pot = parse_potential(p);
      const auto r = bowen_root(sys, pot, 5, 1e-12);
      CHECK(r.residual <= 1e-12);
      CHECK(r.s >= 0.0);
      CHECK(r.s <= default_s_max(sys, pot));
    }
  }
}

TEST_CASE("extrapolation") {
  const auto e = bowen_extrapolate({{2, 1.5}, {4, 1.25}});
  CHECK(e.value == 1.0);
  CHECK(bowen_extrapolate({{2, 0.5}, {4, 0.5}, {8, 0.5}}).value == 0.5);
  CHECK_THROWS_AS(bowen_extrapolate({{2, 1.0}}), ContractError);
  CHECK_THROWS_AS(bowen_extrapolate({{2, 1.0}, {3, 1.1}}), ContractError);
}

TEST_CASE("dimension reports") {
  const auto b2 = build_system("badic:b=2");
  const auto rep = dimension_report(b2, Potential::logderiv(3.0));
  for (const auto& s : rep.samples) CHECK(std::abs(s.s - 0.25) < 1e-12);
  CHECK(std::abs(rep.extrapolation.value - 0.25) < 1e-12);
  CHECK(rep.bracket_ok);
  const auto j = to_json(rep);
  for (const char* k : {"system", "potential", "samples", "extrapolated", "pressure_bracket", "config"}) {
    CHECK(j.contains(k));
  }
  CHECK(j["samples"][0].contains("s_n"));
  CHECK(j["samples"][0].contains("residual"));

  const auto c3 = build_system("cantor:b=3,digits=0|2");
  const auto h = dimension_report(c3, Potential::logderiv(0.0));
  CHECK(std::abs(h.extrapolation.value - std::log(2.0) / std::log(3.0)) < 1e-12);
}

TEST_CASE("sub-multiplicativity with sup weights on affine systems") {
  const auto sys = build_system("affine:[(0.2,0),(0.5,0.5)]");
  const auto pot = parse_potential("logderiv:t=0.5");
  const ThermoOptions sup{kDefaultBudget, 1, true};
  for (double s : {0.2, 0.6}) {
    std::vector<double> z(9);
    for (int n = 1; n <= 8; ++n) z[static_cast<std::size_t>(n)] = PartitionSums(sys, pot, n, sup).log_sum(s);
    for (int n = 1; n <= 8; ++n) {
      for (int m = 1; n + m <= 8; ++m) {
        CHECK(z[static_cast<std::size_t>(n + m)] <=
              z[static_cast<std::size_t>(n)] + z[static_cast<std::size_t>(m)] + 1e-12);
      }
    }
  }
}

TEST_CASE("finite-subsystem monotonicity") {
  for (int n : {3, 6}) {
    double prev = 0.0;
    for (int a = 2; a <= 5; ++a) {
      const double s = bowen_root(build_system("cf:amax=" + std::to_string(a)), Potential::constant(0.0), n).s;
      CHECK(s >= prev);
      prev = s;
    }
  }
}

TEST_CASE("depth-independent roots for locally constant data") {
  for (const char* d : {"badic:b=3", "affine:[(0.25,0),(0.5,0.5)]"}) {
    const auto sys = build_system(d);
    for (const char* p : {"logderiv:t=0.7", "const:c=0.2"}) {
      const auto pot = parse_potential(p);
      if (std::string(p).rfind("const", 0) == 0 && std::string(d) != "badic:b=3") continue;
      const double s1 = bowen_root(sys, pot, 1).s;
      for (int n = 2; n <= 8; ++n) CHECK(std::abs(bowen_root(sys, pot, n).s - s1) < 1e-11);
    }
  }
}

TEST_CASE("parallel and serial sums are bitwise equal") {
  const auto cf = build_system("cf:amax=3");
  const auto pot = parse_potential("logderiv:t=0.3");
  const PartitionSums serial(cf, pot, 9, {kDefaultBudget, 1, false});
  const PartitionSums par(cf, pot, 9, {kDefaultBudget, 4, false});
  CHECK(serial.log_weights() == par.log_weights());
  for (double s : {0.1, 0.4, 0.9}) CHECK(serial.log_sum(s) == par.log_sum(s));
}

TEST_CASE("budget refusal") {
  const auto b2 = build_system("badic:b=2");
  CHECK_THROWS_AS(bowen_root(b2, Potential::constant(0.0), 20, 1e-12, {1000, 1, false}), BudgetExceeded);
  CHECK_THROWS_AS(pressure_approx(b2, Potential::constant(0.0), -1.0, 3), ContractError);
}
