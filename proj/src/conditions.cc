// cdr/conditions.cc

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

#include "cdr/conditions.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cdr/rng.h"

namespace cdr {

FeatureSequence TemporalCondition(const FeatureSequence &x_gwt) {
  CheckFinite(x_gwt.data, "TemporalCondition");
  const Mat &x = x_gwt.data;
  Mat p(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    double m = x.col(c).maxCoeff();
    Eigen::ArrayXd e = (x.col(c).array() - m).exp();
    p.col(c) = e / e.sum();
  }
  return FeatureSequence(std::move(p));
}

Mat TemporalConditionBackward(const Mat &p, const Mat &grad_p) {
  CheckSameShape(p, grad_p, "TemporalConditionBackward");
  Mat gx(p.rows(), p.cols());
  for (Eigen::Index c = 0; c < p.cols(); ++c) {
    double dot = p.col(c).dot(grad_p.col(c));
    gx.col(c) =
        p.col(c).array() * (grad_p.col(c).array() - dot);
  }
  return gx;
}

FeatureSequence GlossCondition(const FeatureSequence &v, const Codebook &cb,
                               std::vector<int> *indices) {
  if (v.Channels() != cb.Channels())
    throw std::invalid_argument(
        "GlossCondition: channel count does not match codebook");
  Mat out(v.Time(), v.Channels());
  if (indices) indices->assign(v.Time(), -1);
  for (Eigen::Index i = 0; i < v.Time(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < cb.Size(); ++k) {
      double d = (v.data.row(i) - cb.entries.row(k)).squaredNorm();
      if (d < best_d) {  // strict: ties keep the lowest index
        best_d = d;
        best = static_cast<int>(k);
      }
    }
    out.row(i) = cb.entries.row(best);
    if (indices) (*indices)[i] = best;
  }
  return FeatureSequence(std::move(out));
}

FeatureSequence CombineConditions(const FeatureSequence &p_tc,
                                  const FeatureSequence &p_gc, double tau) {
  if (tau < 0.0 || tau > 1.0)
    throw std::invalid_argument("CombineConditions: tau must be in [0, 1]");
  CheckSameShape(p_tc.data, p_gc.data, "CombineConditions");
  return FeatureSequence(tau * p_tc.data + (1.0 - tau) * p_gc.data);
}

Codebook BuildCodebook(uint64_t seed, int g, int c, double min_separation) {
  if (g < 2 || c < 1)
    throw std::invalid_argument("BuildCodebook: need g >= 2, c >= 1");
  const int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng = Rng::Stream(seed, kRngData, static_cast<uint64_t>(attempt));
    Mat e = rng.NormalMat(g, c);
    bool ok = true;
    for (int i = 0; i < g && ok; ++i)
      for (int j = i + 1; j < g; ++j)
        if ((e.row(i) - e.row(j)).norm() < min_separation) {
          ok = false;
          break;
        }
    if (ok) return Codebook{std::move(e)};
  }
  throw std::runtime_error(
      "BuildCodebook: separation floor unreachable after bounded retries");
}

}  // namespace cdr
