// tests/test_ctc.cc

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
#include <stdexcept>
#include <vector>

#include "cdr/rng.h"
#include "doctest.h"

using cdr::CtcGreedyDecode;
using cdr::CtcInfeasibleError;
using cdr::CtcLoss;
using cdr::CtcMinFrames;
using cdr::GlossSequence;
using cdr::Mat;
using cdr::Rng;

namespace {

// Brute-force oracle: enumerate every length-T frame labelling, keep those
// that collapse (drop repeats, strip blanks) to the target, and sum their
// softmax path probabilities. Tractable for T <= 6 and small alphabets.
double BruteForceNegLogProb(const Mat &logits, const GlossSequence &target) {
  const int t_len = static_cast<int>(logits.rows());
  const int k = static_cast<int>(logits.cols());
  Mat logp(t_len, k);
  for (int t = 0; t < t_len; ++t) {
    double mx = logits.row(t).maxCoeff();
    double z = std::log((logits.row(t).array() - mx).exp().sum()) + mx;
    logp.row(t) = logits.row(t).array() - z;
  }
  double total = 0.0;
  std::vector<int> path(t_len, 0);
  long count = 1;
  for (int t = 0; t < t_len; ++t) count *= k;
  for (long code = 0; code < count; ++code) {
    long c = code;
    for (int t = 0; t < t_len; ++t) {
      path[t] = static_cast<int>(c % k);
      c /= k;
    }
    GlossSequence collapsed;
    int prev = -1;
    for (int t = 0; t < t_len; ++t) {
      if (path[t] != prev && path[t] != 0) collapsed.push_back(path[t]);
      prev = path[t];
    }
    if (collapsed != target) continue;
    double lp = 0.0;
    for (int t = 0; t < t_len; ++t) lp += logp(t, path[t]);
    total += std::exp(lp);
  }
  return -std::log(total);
}

}  // namespace

TEST_CASE("minimum frame count") {
  CHECK(CtcMinFrames({1}) == 1);
  CHECK(CtcMinFrames({1, 2, 3}) == 3);
  CHECK(CtcMinFrames({1, 1}) == 3);
  CHECK(CtcMinFrames({2, 2, 2}) == 5);
  CHECK(CtcMinFrames({}) == 0);
}

TEST_CASE("single-frame single-label closed form") {
  // One frame, target {1}: the loss is the negative log-softmax of class 1.
  Mat logits(1, 3);
  logits << 0.2, 1.4, -0.7;
  auto r = CtcLoss(logits, {1});
  double mx = logits.maxCoeff();
  double z = std::log((logits.array() - mx).exp().sum()) + mx;
  CHECK(r.loss == doctest::Approx(z - 1.4).epsilon(1e-12));
  // Gradient is softmax minus the one-hot target.
  Mat sm = (logits.array() - z).exp();
  CHECK(r.grad(0, 0) == doctest::Approx(sm(0, 0)).epsilon(1e-12));
  CHECK(r.grad(0, 1) == doctest::Approx(sm(0, 1) - 1.0).epsilon(1e-12));
  CHECK(r.grad(0, 2) == doctest::Approx(sm(0, 2)).epsilon(1e-12));
}

TEST_CASE("uniform logits match the hand-counted path sum") {
  // T = 2, K = 2 (blank + one label), target {1}. With uniform softmax
  // (p = 1/2 everywhere) the valid paths are (1,1), (0,1), (1,0): 3/4.
  Mat logits = Mat::Zero(2, 2);
  auto r = CtcLoss(logits, {1});
  CHECK(r.loss == doctest::Approx(-std::log(3.0 / 4.0)).epsilon(1e-12));
}

TEST_CASE("loss matches the exhaustive path enumeration oracle") {
  Rng rng(11);
  struct Case {
    int t_len;
    GlossSequence target;
  };
  std::vector<Case> cases = {
      {3, {1}},      {4, {1, 2}},    {5, {2, 1, 3}}, {6, {1, 1}},
      {5, {3, 3}},   {6, {1, 2, 1}}, {4, {2}},       {6, {1, 2, 3}},
  };
  for (const auto &cs : cases) {
    Mat logits = rng.NormalMat(cs.t_len, 4);  // blank + 3 labels
    auto r = CtcLoss(logits, cs.target);
    double oracle = BruteForceNegLogProb(logits, cs.target);
    CHECK(r.loss == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("gradient matches finite differences") {
  Rng rng(13);
  const double h = 1e-6;
  for (int rep = 0; rep < 4; ++rep) {
    Mat logits = rng.NormalMat(7, 4);
    GlossSequence target = {1, 3, 3};
    auto r = CtcLoss(logits, target);
    for (int t = 0; t < 7; ++t)
      for (int k = 0; k < 4; ++k) {
        double orig = logits(t, k);
        logits(t, k) = orig + h;
        double fp = CtcLoss(logits, target).loss;
        logits(t, k) = orig - h;
        double fm = CtcLoss(logits, target).loss;
        logits(t, k) = orig;
        double fd = (fp - fm) / (2 * h);
        CHECK(r.grad(t, k) == doctest::Approx(fd).epsilon(1e-4));
      }
  }
}

TEST_CASE("gradient rows sum to zero") {
  // The loss depends on logits only through per-frame softmaxes, so each
  // gradient row is orthogonal to a constant shift.
  Rng rng(17);
  Mat logits = rng.NormalMat(9, 5);
  auto r = CtcLoss(logits, {2, 4, 1});
  for (int t = 0; t < 9; ++t)
    CHECK(std::abs(r.grad.row(t).sum()) < 1e-12);
  // Shift invariance of the loss itself.
  Mat shifted = logits;
  shifted.col(0).array() += 0.0;
  shifted.array() += 3.7;
  CHECK(CtcLoss(shifted, {2, 4, 1}).loss ==
        doctest::Approx(r.loss).epsilon(1e-10));
}

TEST_CASE("infeasible targets are rejected") {
  Mat logits = Mat::Zero(2, 3);
  CHECK_THROWS_AS(CtcLoss(logits, {1, 2, 1}), CtcInfeasibleError);
  CHECK_THROWS_AS(CtcLoss(logits, {1, 1}), CtcInfeasibleError);
  CHECK_THROWS_AS(CtcLoss(logits, {1, 0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(CtcLoss(logits, {1, 5}), std::invalid_argument);
  CHECK_THROWS_AS(CtcLoss(logits, {}), std::invalid_argument);
}

TEST_CASE("greedy decode collapses repeats and drops blanks") {
  // Frame argmax sequence: 1 1 0 1 2 2 0 0 3 -> decoded 1 1 2 3.
  std::vector<int> frames = {1, 1, 0, 1, 2, 2, 0, 0, 3};
  Mat logits = Mat::Zero(static_cast<int>(frames.size()), 4);
  for (size_t t = 0; t < frames.size(); ++t) logits(t, frames[t]) = 5.0;
  CHECK(CtcGreedyDecode(logits) == GlossSequence({1, 1, 2, 3}));

  // All blanks decode to the empty sequence.
  Mat blanks = Mat::Zero(4, 3);
  blanks.col(0).array() = 2.0;
  CHECK(CtcGreedyDecode(blanks).empty());

  // Argmax ties resolve to the lowest class index (here the blank).
  Mat tie = Mat::Zero(3, 3);
  CHECK(CtcGreedyDecode(tie).empty());
}

TEST_CASE("training the logits directly drives the loss toward zero") {
  // Gradient descent on the logits alone reaches a near-certain alignment;
  // checks the sign and scale of the gradient end to end.
  Rng rng(19);
  Mat logits = 0.1 * rng.NormalMat(8, 4);
  GlossSequence target = {2, 1, 2};
  double first = CtcLoss(logits, target).loss;
  for (int it = 0; it < 300; ++it) {
    auto r = CtcLoss(logits, target);
    logits -= 0.5 * r.grad;
  }
  double last = CtcLoss(logits, target).loss;
  CHECK(last < 0.05);
  CHECK(last < first);
  CHECK(CtcGreedyDecode(logits) == target);
}
