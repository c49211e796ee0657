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


#ifndef RECURDIM_VERIFY_HPP_
#define RECURDIM_VERIFY_HPP_

#include <string>
#include <vector>

#include "json.hpp"

namespace recurdim {

struct VerifyCase {
  std::string name;
  double expected = 0.0;
  double got = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// Bowen roots of the b-adic, dyadic digit-frequency and triadic Cantor
// systems against their closed-form dimensions.
std::vector<VerifyCase> closed_form_suite(int workers = 1);

nlohmann::ordered_json to_json(const std::vector<VerifyCase>& cases);

}  // namespace recurdim

#endif  // RECURDIM_VERIFY_HPP_
