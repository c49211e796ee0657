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
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "recurdim/error.hpp"
#include "recurdim/ifs.hpp"

using namespace recurdim;

namespace {

Word to_word(const std::vector<int>& w) { return Word(w.begin(), w.end()); }

std::vector<long long> digits_of(const Word& w) {
  std::vector<long long> a;
  for (Symbol s : w) a.push_back(static_cast<long long>(s) + 1);
  return a;
}

}  // namespace

TEST_CASE("badic and cantor constants") {
  const auto b2 = build_system("badic:b=2");
  CHECK(b2.alphabet_size() == 2);
  CHECK(b2.rho() == 0.5);
  CHECK(b2.eta() == 0.5);
  CHECK(b2.distortion() == 1.0);
  CHECK(b2.is_affine());

  const auto c3 = build_system("cantor:b=3,digits=0|2");
  CHECK(c3.rho() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(c3.eta() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(c3.distortion() == 1.0);
}

TEST_CASE("continued fraction system contracts at depth 2") {
  const auto cf = build_system("cf:amax=2");
  CHECK(cf.rho_one_step() == 1.0);
  CHECK(cf.rho() < 1.0);
  CHECK(cf.contraction_depth() == 2);
  CHECK(cf.distortion() >= 1.0);
  CHECK_FALSE(cf.distortion_certified());
}

TEST_CASE("cylinder records") {
  const auto b2 = build_system("badic:b=2");
  const auto r = cylinder_record(b2, Word{1, 0});
  CHECK(r.interval.lo == 0.5);
  CHECK(r.interval.hi == 0.75);
  CHECK(r.diameter == 0.25);
  CHECK(r.fixed_point == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const auto cf = build_system("cf:amax=2");
  const auto g = cylinder_record(cf, Word{0});
  CHECK(g.interval.lo == 0.5);
  CHECK(g.interval.hi == 1.0);
  CHECK(g.fixed_point == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-15));
  CHECK(g.derivative == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-14));

  const auto c3 = build_system("cantor:b=3,digits=0|2");
  const auto k = cylinder_record(c3, Word{0, 1});
  CHECK(k.interval.lo == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(k.interval.hi == doctest::Approx(3.0 / 9.0).epsilon(1e-15));
  CHECK(k.diameter == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("exact word maps match rational endpoint oracle") {
  const auto c3 = build_system("cantor:b=3,digits=0|2");
  const std::vector<oracle::Affine> br{{oracle::Q(1, 3), 0}, {oracle::Q(1, 3), oracle::Q(2, 3)}};
  oracle::for_each_word(2, 6, [&](const std::vector<int>& w) {
    const auto [lo, hi] = oracle::affine_cylinder(br, w);
    const auto ex = c3.exact_word_map(to_word(w)).image_of_unit();
    CHECK(ex.lo == Rational(lo.numerator(), lo.denominator()));
    CHECK(ex.hi == Rational(hi.numerator(), hi.denominator()));
  });
  const auto cf = build_system("cf:amax=3");
  oracle::for_each_word(3, 5, [&](const std::vector<int>& w) {
    const auto [lo, hi] = oracle::cf_cylinder(digits_of(to_word(w)));
    const auto ex = cf.exact_word_map(to_word(w)).image_of_unit();
    CHECK(ex.lo == Rational(lo.numerator(), lo.denominator()));
    CHECK(ex.hi == Rational(hi.numerator(), hi.denominator()));
  });
}

TEST_CASE("enumeration order and counts") {
  const auto b2 = build_system("badic:b=2");
  std::vector<Word> seen;
  enumerate_cylinders(b2, 3, [&](const CylinderRecord& r) {
    CHECK(r.diameter == 0.125);
    seen.push_back(r.word);
  });
  REQUIRE(seen.size() == 8);
  for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == word_from_rank(2, 3, i));

  const auto cf = build_system("cf:amax=2");
  const auto recs = cylinders(cf, 2);
  REQUIRE(recs.size() == 4);
  for (const auto& r : recs) {
    const auto [lo, hi] = oracle::cf_cylinder(digits_of(r.word));
    CHECK(r.interval.lo == doctest::Approx(oracle::to_d(lo)).epsilon(1e-15));
    CHECK(r.interval.hi == doctest::Approx(oracle::to_d(hi)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(enumerate_cylinders(b2, 0, [](const CylinderRecord&) {}), ContractError);
  CHECK_THROWS_AS(enumerate_cylinders(b2, 30, [](const CylinderRecord&) {}, {1000}),
                  BudgetExceeded);
}

TEST_CASE("distortion bounds on cf:amax=3 up to depth 12") {
  const auto cf = build_system("cf:amax=3");
  const double K = cf.distortion();
  std::size_t bad = 0, total = 0;
  for (int n = 1; n <= 12; ++n) {
    enumerate_cylinders(cf, n, [&](const CylinderRecord& r) {
      ++total;
      if (!(r.diameter <= K * r.derivative && r.derivative <= K * r.diameter)) ++bad;
    });
  }
  CHECK(total == 797160);
  CHECK(bad == 0);
}

TEST_CASE("diameter decay and one-step ratio") {
  for (const char* d : {"badic:b=3", "cf:amax=2", "cantor:b=5,digits=0|2|4", "affine:[(0.3,0),(0.5,0.5)]"}) {
    const auto sys = build_system(d);
    for (int n = 1; n <= 10; ++n) {
      enumerate_cylinders(sys, n, [&](const CylinderRecord& r) {
        const double diam = to_double(sys.exact_word_map(r.word).image_of_unit().length());
        CHECK(diam <= std::pow(sys.rho(), n) * (1 + 1e-12));
        if (n > 1) {
          const Word prefix(r.word.begin(), r.word.end() - 1);
          const double ratio = diam / to_double(sys.exact_word_map(prefix).image_of_unit().length());
          CHECK(ratio >= sys.eta() * (1 - 1e-12));
          CHECK(ratio <= 1.0);
        }
      });
    }
  }
}

TEST_CASE("quasi-multiplicativity up to depth 10") {
  for (const char* d : {"cf:amax=2", "badic:b=2", "affine:[(0.25,0),(0.5,0.5)]"}) {
    const auto sys = build_system(d);
    const double K = sys.distortion();
    std::size_t bad = 0;
    for (int n = 2; n <= 10; ++n) {
      enumerate_cylinders(sys, n, [&](const CylinderRecord& r) {
        for (int k = 1; k < n; ++k) {
          const WordView w(r.word);
          const double q =
              r.diameter / (sys.image(w.first(k)).length() * sys.image(w.subspan(k)).length());
          if (!(q >= 1.0 / K * (1 - 1e-12) && q <= K * (1 + 1e-12))) ++bad;
        }
      });
    }
    CHECK_MESSAGE(bad == 0, d);
  }
}

TEST_CASE("affine diameters are exact slope products") {
  const auto sys = build_system("affine:[(1/4,0),(1/3,1/2),(1/8,7/8)]");
  CHECK(sys.distortion() == 1.0);
  for (int n = 1; n <= 6; ++n) {
    enumerate_cylinders(sys, n, [&](const CylinderRecord& r) {
      Rational prod = 1;
      for (Symbol s : r.word) prod *= sys.branch(s).exact_map().matrix()(0, 0);
      CHECK(sys.exact_word_map(r.word).image_of_unit().length() == prod);
      CHECK(r.diameter == doctest::Approx(to_double(prod)).epsilon(1e-13));
      CHECK(r.derivative == doctest::Approx(r.diameter).epsilon(1e-13));
    });
  }
}

TEST_CASE("siblings have disjoint interiors") {
  for (const char* d : {"cf:amax=3", "badic:b=3", "cantor:b=3,digits=0|2"}) {
    const auto sys = build_system(d);
    for (int n = 1; n <= 6; ++n) {
      std::vector<BasicInterval<Rational>> iv;
      enumerate_cylinders(sys, n, [&](const CylinderRecord& r) {
        iv.push_back(sys.exact_word_map(r.word).image_of_unit());
      });
      std::sort(iv.begin(), iv.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
      for (std::size_t i = 1; i < iv.size(); ++i) CHECK(iv[i].lo >= iv[i - 1].hi);
    }
  }
}

TEST_CASE("descriptor errors") {
  CHECK_THROWS_WITH_AS(build_system("badic:b=1"), doctest::Contains("alphabet size"), Error);
  CHECK_THROWS_AS(build_system("cf:amax=1"), Error);
  CHECK_THROWS_AS(build_system("badic"), ParseError);
  CHECK_THROWS_AS(build_system("badic:b=x"), ParseError);
  CHECK_THROWS_AS(build_system("nope:b=2"), ParseError);
  CHECK_THROWS_AS(build_system("affine:[(0.6,0),(0.6,0.4)]"), Error);
  CHECK_THROWS_AS(build_system("affine:[(1,0),(0.5,0.5)]"), Error);
  CHECK_THROWS_AS(build_system("affine:[(0.5,0.7),(0.2,0)]"), Error);
  CHECK_THROWS_AS(build_system("cantor:b=3,digits=0|3"), Error);
  const auto b2 = build_system("badic:b=2");
  CHECK_THROWS_AS(b2.validate_word(Word{0, 2}), ContractError);
}

TEST_CASE("word helpers") {
  CHECK(periodic_prefix(Word{0, 1}, 5) == Word{0, 1, 0, 1, 0});
  CHECK(word_from_rank(3, 2, 5) == Word{1, 2});
  CHECK(word_count(2, 64) == UINT64_MAX);
  CHECK(format_word(Word{0, 1}) == "0 1");
}
