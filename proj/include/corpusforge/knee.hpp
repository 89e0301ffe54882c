// Copyright 2026 The corpusforge Authors.
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace corpusforge::knee {

struct KneeResult {
  double cutoff = 0.0;
  std::size_t index = 0;  // position in the ascending sorted list
  bool found = false;
};

struct KneeOptions {
  double sensitivity = 1.0;
};

// Kneedle on the ascending sorted scores, read as a convex increasing curve.
// Both axes are scaled to [0,1]; the curve is mirrored so the knee becomes a
// maximum of the difference to the diagonal. A local maximum counts when the
// difference later falls below its threshold before the next maximum; among
// those the largest difference wins.
inline KneeResult find_knee(std::vector<double> scores, const KneeOptions& options = {}) {
  KneeResult result;
  const std::size_t n = scores.size();
  if (n < 3) return result;
  std::sort(scores.begin(), scores.end());
  const double lo = scores.front(), hi = scores.back();
  if (!(hi > lo)) return result;

  // Mirrored, normalised curve: x_i = i/(n-1), y'_i = 1 - y_norm(n-1-i).
  std::vector<double> diff(n);
  const double step = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) * step;
    const double y = 1.0 - (scores[n - 1 - i] - lo) / (hi - lo);
    diff[i] = y - x;
  }
  const double threshold_drop = options.sensitivity * step;

  constexpr double kEps = 1e-9;
  std::vector<std::size_t> maxima;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (diff[i] >= diff[i - 1] && diff[i] >= diff[i + 1] && diff[i] > kEps) maxima.push_back(i);
  }
  double best = 0.0;
  std::size_t best_i = 0;
  bool any = false;
  for (std::size_t k = 0; k < maxima.size(); ++k) {
    const std::size_t m = maxima[k];
    const std::size_t limit = k + 1 < maxima.size() ? maxima[k + 1] : n;
    const double threshold = diff[m] - threshold_drop;
    bool confirmed = false;
    for (std::size_t j = m + 1; j < limit; ++j) {
      if (diff[j] < threshold) {
        confirmed = true;
        break;
      }
    }
    if (confirmed && (!any || diff[m] > best)) {
      best = diff[m];
      best_i = m;
      any = true;
    }
  }
  if (!any) return result;
  result.found = true;
  result.index = n - 1 - best_i;
  result.cutoff = scores[result.index];
  return result;
}

}  // namespace corpusforge::knee
