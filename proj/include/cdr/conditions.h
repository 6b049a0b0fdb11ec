// cdr/conditions.h

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

#ifndef CDR_CONDITIONS_H_
#define CDR_CONDITIONS_H_

#include <vector>

#include "cdr/feature.h"

namespace cdr {

// Fixed table of per-gloss embedding vectors used for nearest-neighbor
// quantization. Immutable after construction; rows are entries.
struct Codebook {
  Mat entries;  // G x C
  Eigen::Index Size() const { return entries.rows(); }
  Eigen::Index Channels() const { return entries.cols(); }
};

// Gloss-wise temporal condition: per-channel softmax across the time axis,
// computed with max-subtraction for overflow safety. Each output column sums
// to 1 and is strictly positive.
FeatureSequence TemporalCondition(const FeatureSequence &x_gwt);

// Gradient of TemporalCondition: given upstream gradient w.r.t. the softmax
// output, returns the gradient w.r.t. the input. `p` is the forward output.
Mat TemporalConditionBackward(const Mat &p, const Mat &grad_p);

// Gloss condition: each time row replaced by the nearest codebook entry
// (Euclidean distance, ties to the lowest index). Also reports the chosen
// indices when `indices` is non-null.
FeatureSequence GlossCondition(const FeatureSequence &v, const Codebook &cb,
                               std::vector<int> *indices = nullptr);

// tau * p_tc + (1 - tau) * p_gc, tau in [0, 1].
FeatureSequence CombineConditions(const FeatureSequence &p_tc,
                                  const FeatureSequence &p_gc, double tau);

// Deterministic well-separated codebook. Entries are seeded unit-scale
// Gaussian draws, redrawn (bounded retries) until every pairwise distance
// clears `min_separation`. Throws if the floor is unreachable.
Codebook BuildCodebook(uint64_t seed, int g, int c,
                       double min_separation = 0.5);

}  // namespace cdr

#endif  // CDR_CONDITIONS_H_
