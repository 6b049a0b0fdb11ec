// cdr/ctc.cc

// Copyright 2026  cdrseq authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "cdr/ctc.h"

#include <cmath>
#include <limits>
#include <string>

namespace cdr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogSumExp2(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double LogSumExp3(double a, double b, double c) {
  return LogSumExp2(LogSumExp2(a, b), c);
}

// Row-wise log-softmax of unnormalized scores.
Mat LogSoftmaxRows(const Mat &logits) {
  Mat out(logits.rows(), logits.cols());
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    double m = logits.row(t).maxCoeff();
    double lse =
        m + std::log((logits.row(t).array() - m).exp().sum());
    out.row(t) = logits.row(t).array() - lse;
  }
  return out;
}

}  // namespace

int CtcMinFrames(const GlossSequence &target) {
  int repeats = 0;
  for (size_t i = 1; i < target.size(); ++i)
    if (target[i] == target[i - 1]) ++repeats;
  return static_cast<int>(target.size()) + repeats;
}

CtcResult CtcLoss(const Mat &logits, const GlossSequence &target) {
  const Eigen::Index num_frames = logits.rows();
  const Eigen::Index num_classes = logits.cols();
  if (num_frames < 1 || num_classes < 2)
    throw std::invalid_argument("CtcLoss: logits must be T x (G+1), T >= 1");
  CheckFinite(logits, "CtcLoss(logits)");
  if (target.empty())
    throw std::invalid_argument("CtcLoss: empty target");
  for (int id : target)
    if (id < 1 || id >= num_classes)
      throw std::invalid_argument("CtcLoss: label id out of range: " +
                                  std::to_string(id));
  if (num_frames < CtcMinFrames(target))
    throw CtcInfeasibleError(
        "CtcLoss: target needs " + std::to_string(CtcMinFrames(target)) +
        " frames, got " + std::to_string(num_frames));

  // Blank-augmented label sequence: blank, y1, blank, y2, ..., blank.
  const Eigen::Index s_len = 2 * static_cast<Eigen::Index>(target.size()) + 1;
  std::vector<int> ext(s_len, 0);
  for (size_t i = 0; i < target.size(); ++i) ext[2 * i + 1] = target[i];

  Mat logp = LogSoftmaxRows(logits);

  // la: emission at t included. lb: completion probability from (t, s),
  // emission at t included. Posterior through (t, s) is la + lb - logp.
  Mat la = Mat::Constant(num_frames, s_len, kNegInf);
  Mat lb = Mat::Constant(num_frames, s_len, kNegInf);

  auto allow_skip = [&](Eigen::Index s) {
    return ext[s] != 0 && s >= 2 && ext[s] != ext[s - 2];
  };

  la(0, 0) = logp(0, ext[0]);
  if (s_len > 1) la(0, 1) = logp(0, ext[1]);
  for (Eigen::Index t = 1; t < num_frames; ++t) {
    for (Eigen::Index s = 0; s < s_len; ++s) {
      double v = la(t - 1, s);
      if (s >= 1) v = LogSumExp2(v, la(t - 1, s - 1));
      if (allow_skip(s)) v = LogSumExp2(v, la(t - 1, s - 2));
      la(t, s) = (v == kNegInf) ? kNegInf : v + logp(t, ext[s]);
    }
  }
  double log_total = LogSumExp2(la(num_frames - 1, s_len - 1),
                                s_len >= 2 ? la(num_frames - 1, s_len - 2)
                                           : kNegInf);

  lb(num_frames - 1, s_len - 1) = logp(num_frames - 1, ext[s_len - 1]);
  if (s_len >= 2)
    lb(num_frames - 1, s_len - 2) = logp(num_frames - 1, ext[s_len - 2]);
  for (Eigen::Index t = num_frames - 2; t >= 0; --t) {
    for (Eigen::Index s = 0; s < s_len; ++s) {
      double v = lb(t + 1, s);
      if (s + 1 < s_len) v = LogSumExp2(v, lb(t + 1, s + 1));
      if (s + 2 < s_len && ext[s + 2] != 0 && ext[s + 2] != ext[s])
        v = LogSumExp2(v, lb(t + 1, s + 2));
      lb(t, s) = (v == kNegInf) ? kNegInf : v + logp(t, ext[s]);
    }
  }

  CtcResult res;
  res.loss = -log_total;
  res.grad = Mat::Zero(num_frames, num_classes);
  for (Eigen::Index t = 0; t < num_frames; ++t) {
    // log sum of posteriors per class at frame t
    std::vector<double> lg(num_classes, kNegInf);
    for (Eigen::Index s = 0; s < s_len; ++s) {
      double post = la(t, s) + lb(t, s) - logp(t, ext[s]);
      lg[ext[s]] = LogSumExp2(lg[ext[s]], post);
    }
    for (Eigen::Index k = 0; k < num_classes; ++k) {
      double soft = std::exp(logp(t, k));
      double occ = (lg[k] == kNegInf) ? 0.0 : std::exp(lg[k] - log_total);
      res.grad(t, k) = soft - occ;
    }
  }
  return res;
}

GlossSequence CtcGreedyDecode(const Mat &logits) {
  GlossSequence out;
  int prev = -1;
  for (Eigen::Index t = 0; t < logits.rows(); ++t) {
    int best = 0;
    for (Eigen::Index k = 1; k < logits.cols(); ++k)
      if (logits(t, k) > logits(t, best)) best = static_cast<int>(k);
    if (best != prev && best != 0) out.push_back(best);
    prev = best;
  }
  return out;
}

}  // namespace cdr
