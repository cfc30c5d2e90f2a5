// Copyright 2026 The spokendst Authors
//
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

// Dynamic-programming edit distances shared by the phonetic distance and by
// WER/CER scoring.

#ifndef SPOKENDST_EDIT_DISTANCE_HPP
#define SPOKENDST_EDIT_DISTANCE_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace spokendst {

/// Minimum alignment cost between `a` and `b` where insertions and deletions
/// each cost `indel` and substituting x by y costs `sub(x, y)` (expected to be
/// 0 for equal elements).
template <typename T, typename SubCost>
double weighted_edit_distance(std::span<const T> a, std::span<const T> b, SubCost&& sub,
                              double indel = 1.0) {
  std::vector<double> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<double>(j) * indel;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<double>(i) * indel;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const double diag = prev[j - 1] + sub(a[i - 1], b[j - 1]);
      cur[j] = std::min({diag, prev[j] + indel, cur[j - 1] + indel});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// Operation counts of one minimum-cost uniform Levenshtein alignment.
struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;

  std::size_t total() const noexcept { return substitutions + insertions + deletions; }
};

/// Uniform-cost Levenshtein alignment of `hyp` against `ref`. Deletions are
/// reference elements missing from the hypothesis. On ties the backtrace
/// prefers match/substitution, then deletion, then insertion.
template <typename T>
EditCounts levenshtein_counts(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::size_t> cost((n + 1) * (m + 1));
  auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  for (std::size_t i = 0; i <= n; ++i) cost[at(i, 0)] = i;
  for (std::size_t j = 0; j <= m; ++j) cost[at(0, j)] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = cost[at(i - 1, j - 1)] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cost[at(i, j)] = std::min({diag, cost[at(i - 1, j)] + 1, cost[at(i, j - 1)] + 1});
    }
  }

  EditCounts counts;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = cost[at(i, j)];
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (here == cost[at(i - 1, j - 1)] + (same ? 0 : 1)) {
        if (!same) ++counts.substitutions;
        --i, --j;
        continue;
      }
    }
    if (i > 0 && here == cost[at(i - 1, j)] + 1) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

}  // namespace spokendst

#endif  // SPOKENDST_EDIT_DISTANCE_HPP
