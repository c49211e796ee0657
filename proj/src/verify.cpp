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

#include "recurdim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "recurdim/ifs.hpp"
#include "recurdim/numtheory.hpp"
#include "recurdim/potential.hpp"
#include "recurdim/thermo.hpp"

namespace recurdim {
namespace {

std::string num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

VerifyCase make(std::string name, double expected, double got, double tol) {
  return {std::move(name), expected, got, tol, std::abs(got - expected) <= tol};
}

}  // namespace

std::vector<VerifyCase> closed_form_suite(int workers) {
  std::vector<VerifyCase> out;
  const ThermoOptions opts{kDefaultBudget, workers, false};

  for (int b : {2, 3, 5}) {
    const IfsSystem sys = build_system("badic:b=" + std::to_string(b));
    for (double t : {0.0, 0.5, 1.0, 3.0}) {
      const Potential pot = Potential::logderiv(t);
      const double expected = closed_form_dimension("badic-const", t);
      for (int n : {1, 5, 10}) {
        const double s = bowen_root(sys, pot, n, 1e-12, opts).s;
        out.push_back(make("badic b=" + std::to_string(b) + " t=" + num(t) + " n=" +
                               std::to_string(n),
                           expected, s, 1e-10));
      }
    }
  }

  const IfsSystem dyadic = build_system("badic:b=2");
  for (double t : {0.5, 1.0, 2.0}) {
    const Potential pot = Potential::digit_indicator(t, 1);
    const double expected = closed_form_dimension("dyadic-frequency", t);
    std::vector<double> roots;
    for (int n : {4, 8, 16}) {
      roots.push_back(bowen_root(dyadic, pot, n, 1e-12, opts).s);
      out.push_back(make("dyadic-frequency t=" + num(t) + " n=" + std::to_string(n), expected,
                         roots.back(), 1e-9));
    }
    const auto [lo, hi] = std::minmax_element(roots.begin(), roots.end());
    out.push_back(make("dyadic-frequency t=" + num(t) + " n-spread", 0.0, *hi - *lo, 1e-10));
  }

  const IfsSystem cantor = build_system("cantor:b=3,digits=0|2");
  for (double t : {0.0, 1.0, 2.0}) {
    const Potential pot = Potential::logderiv(t);
    const double expected = closed_form_dimension("cantor-const", t);
    for (int n : {4, 8, 12}) {
      out.push_back(make("triadic-cantor t=" + num(t) + " n=" + std::to_string(n), expected,
                         bowen_root(cantor, pot, n, 1e-12, opts).s, 1e-10));
    }
  }
  const double mahler = bowen_root(cantor, Potential::logderiv(1.0), 8, 1e-12, opts).s;
  out.push_back(make("triadic-cantor mahler bound", std::log(2.0) / (2.0 * std::log(3.0)),
                     mahler, 1e-10));
  return out;
}

nlohmann::ordered_json to_json(const std::vector<VerifyCase>& cases) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto& c : cases) {
    arr.push_back({{"name", c.name},
                   {"expected", c.expected},
                   {"got", c.got},
                   {"tol", c.tol},
                   {"pass", c.pass}});
    all = all && c.pass;
  }
  return {{"cases", arr}, {"all_pass", all}};
}

}  // namespace recurdim
