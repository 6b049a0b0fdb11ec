// cdr/ctc.h

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

#ifndef CDR_CTC_H_
#define CDR_CTC_H_

#include <stdexcept>
#include <vector>

#include "cdr/feature.h"

namespace cdr {

// Label ids are 1..G; id 0 is the blank. A gloss sequence never contains
// blanks.
using GlossSequence = std::vector<int>;

// Raised when the target cannot be aligned: T < L + #adjacent-equal pairs.
class CtcInfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Number of frames needed to emit `target` (adjacent repeats require a
// separating blank).
int CtcMinFrames(const GlossSequence &target);

struct CtcResult {
  double loss = 0.0;  // negative log total path probability
  Mat grad;           // d loss / d logits, T x (G+1)
};

// Log-space forward-backward over the blank-augmented target. logits is
// T x (G+1) with column 0 the blank; rows are unnormalized scores.
CtcResult CtcLoss(const Mat &logits, const GlossSequence &target);

// Best-path decoding: per-frame argmax, collapse consecutive repeats, drop
// blanks. Ties at the argmax go to the lowest class index.
GlossSequence CtcGreedyDecode(const Mat &logits);

}  // namespace cdr

#endif  // CDR_CTC_H_
