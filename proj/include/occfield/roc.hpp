/*
 * Copyright 2026 The occfield Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef OCCFIELD_ROC_HPP_
#define OCCFIELD_ROC_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace occfield {

/// Receiver operating characteristic over a score threshold sweep.
/// Aligned vectors: point i is the operating point "predict positive when
/// score >= thresholds[i]"; the sweep starts at +infinity (0, 0) and ends at
/// the lowest score (1, 1).
struct RocResult {
  std::vector<double> thresholds;
  std::vector<double> tpr;
  std::vector<double> fpr;
  double auc = 0.0;
  double fpr_at_tpr_095 = 1.0;
};

/// Builds the ROC curve for probability-like scores against +1/-1 labels.
/// Tied scores collapse into one sweep step, which keeps the trapezoidal
/// AUC equal to the pair-counting rank statistic (ties at half credit).
inline RocResult roc(std::span<const double> scores,
                     std::span<const int> labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw std::invalid_argument("roc: scores and labels must align");
  }
  std::size_t positives = 0, negatives = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw std::invalid_argument("roc: non-finite score");
    }
    if (labels[i] > 0) {
      ++positives;
    } else {
      ++negatives;
    }
  }
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument(
        "roc: need at least one positive and one negative label");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocResult result;
  result.thresholds.push_back(std::numeric_limits<double>::infinity());
  result.tpr.push_back(0.0);
  result.fpr.push_back(0.0);

  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    // Consume the whole tie group at this threshold.
    while (i < order.size() && scores[order[i]] == threshold) {
      if (labels[order[i]] > 0) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    result.thresholds.push_back(threshold);
    result.tpr.push_back(static_cast<double>(tp) /
                         static_cast<double>(positives));
    result.fpr.push_back(static_cast<double>(fp) /
                         static_cast<double>(negatives));
  }

  double auc = 0.0;
  for (std::size_t k = 1; k < result.tpr.size(); ++k) {
    auc += (result.fpr[k] - result.fpr[k - 1]) *
           (result.tpr[k] + result.tpr[k - 1]) * 0.5;
  }
  result.auc = auc;

  // TPR is non-decreasing along the sweep, so the first point reaching the
  // 0.95 detection rate carries the smallest achievable FPR.
  result.fpr_at_tpr_095 = 1.0;
  for (std::size_t k = 0; k < result.tpr.size(); ++k) {
    if (result.tpr[k] >= 0.95) {
      result.fpr_at_tpr_095 = result.fpr[k];
      break;
    }
  }
  return result;
}

}  // namespace occfield

#endif  // OCCFIELD_ROC_HPP_
