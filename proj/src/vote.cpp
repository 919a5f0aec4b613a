// Copyright 2026 The adid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adid/vote.hpp"

#include <vector>

#include "adid/error.hpp"
#include "adid/mlp.hpp"

namespace adid {

int vote(std::span<const Eigen::VectorXd> predictions) {
  if (predictions.empty()) fail(ErrorKind::kEmptyInput, "no voters");
  const Eigen::Index k = predictions.front().size();
  if (k == 0) fail(ErrorKind::kEmptyInput, "empty prediction vector");
  std::vector<int> votes(static_cast<std::size_t>(k), 0);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(k);
  for (const auto& p : predictions) {
    if (p.size() != k) fail(ErrorKind::kShape, "voters disagree on class count");
    ++votes[static_cast<std::size_t>(argmax_label(p))];
    mass += p;
  }
  int best = 0;
  for (int c = 1; c < static_cast<int>(k); ++c) {
    const auto uc = static_cast<std::size_t>(c), ub = static_cast<std::size_t>(best);
    if (votes[uc] > votes[ub] || (votes[uc] == votes[ub] && mass(c) > mass(best))) best = c;
  }
  return best;
}

}  // namespace adid
