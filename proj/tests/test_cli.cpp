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

#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "recurdim/cli.hpp"

using namespace recurdim;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("bowen command") {
  const auto r = run({"bowen", "--system", "badic:b=2", "--potential", "logderiv:t=1",
                      "--depths", "4,8", "--tol", "1e-12", "--workers", "1"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  for (const auto& s : j["samples"]) CHECK(std::abs(s["s_n"].get<double>() - 0.5) < 1e-12);
  CHECK(j["config"]["depths"] == nlohmann::json::array({4, 8}));
  CHECK(j["system"] == "badic:b=2");
}

TEST_CASE("exit codes") {
  auto r = run({"bowen", "--system", "badic:b=1", "--potential", "logderiv:t=1"});
  CHECK(r.code == kExitInvalid);
  CHECK(r.err.find("alphabet size") != std::string::npos);
  CHECK(run({"bowen", "--system", "badic:b=2"}).code == kExitInvalid);
  CHECK(run({"frobnicate"}).code == kExitInvalid);
  CHECK(run({"bowen", "--system", "badic:b=2", "--potential", "const:c=x"}).code == kExitInvalid);
  CHECK(run({"bowen", "--system", "badic:b=2", "--potential", "const:c=0", "--depths", "40"}).code ==
        kExitBudget);
  CHECK(run({"cover", "--system", "badic:b=2", "--potential", "const:c=0", "--n-max", "12",
             "--budget", "100"})
            .code == kExitBudget);
  CHECK(run({"quad", "--q-max", "100000", "--budget", "1000"}).code == kExitBudget);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("reports are deterministic and embed their config") {
  const std::vector<std::vector<std::string>> cmds{
      {"pressure", "--system", "cf:amax=2", "--potential", "const:c=0.1", "--depths", "6,8"},
      {"bowen", "--system", "cf:amax=2", "--potential", "const:c=0", "--depths", "4,8"},
      {"cover", "--system", "badic:b=3", "--potential", "logderiv:t=1", "--n-max", "6"},
      {"witness", "--system", "badic:b=2", "--potential", "logderiv:t=1", "--m", "2", "--ell", "2"},
      {"quad", "--q-max", "12"},
      {"quad", "--x", "0.4142135", "--tau", "1", "--q-max", "30"}};
  for (const auto& c : cmds) {
    auto with = c;
    with.insert(with.end(), {"--workers", "2"});
    const auto a = run(with);
    const auto b = run(with);
    REQUIRE_MESSAGE(a.code == kExitOk, std::string(c[0] + ": " + a.err));
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j.contains("config"));
    CHECK(j["config"]["workers"] == 2);
  }
}

TEST_CASE("worker count does not change results") {
  auto base = std::vector<std::string>{"bowen", "--system", "cf:amax=3", "--potential",
                                       "logderiv:t=0.5", "--depths", "4,8"};
  auto one = base, four = base;
  one.insert(one.end(), {"--workers", "1"});
  four.insert(four.end(), {"--workers", "4"});
  auto a = nlohmann::json::parse(run(one).out);
  auto b = nlohmann::json::parse(run(four).out);
  a["config"].erase("workers");
  b["config"].erase("workers");
  CHECK(a == b);
}

TEST_CASE("csv outputs") {
  auto r = run({"cover", "--system", "badic:b=2", "--potential", "logderiv:t=1", "--n-max", "4",
                "--csv"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("n,word_count,s,log_contribution", 0) == 0);
  r = run({"quad", "--q-max", "3", "--csv"});
  CHECK(r.out.rfind("q,p,period,A,B,C,root", 0) == 0);
  r = run({"witness", "--system", "badic:b=2", "--potential", "const:c=0", "--blocks", "3",
           "--s-eps", "0.45", "--csv"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("depth,diameter,mass,local_exponent", 0) == 0);
}

TEST_CASE("witness command on the reference tree") {
  auto r = run({"witness", "--system", "badic:b=2", "--potential", "const:c=0", "--blocks", "3",
                "--s-eps", "0.45"});
  REQUIRE(r.code == kExitOk);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["holder"]["passes"] == true);
  r = run({"witness", "--system", "badic:b=2", "--potential", "const:c=0", "--m", "2"});
  CHECK(r.code == kExitInvalid);
}

TEST_CASE("verify command") {
  const auto r = run({"verify"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("PASS badic b=5 t=3 n=10") != std::string::npos);
}
