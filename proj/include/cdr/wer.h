// cdr/wer.h

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

#ifndef CDR_WER_H_
#define CDR_WER_H_

#include "cdr/ctc.h"

namespace cdr {

struct WerReport {
  double wer = 0.0;
  int sub = 0, del = 0, ins = 0;
  int ref_len = 0;
};

// Unit-cost Levenshtein alignment of hyp against ref. Counts come from the
// backtrace that prefers substitution over deletion over insertion on ties;
// wer = (sub + del + ins) / ref_len. Throws on an empty reference.
WerReport ComputeWer(const GlossSequence &hyp, const GlossSequence &ref);

}  // namespace cdr

#endif  // CDR_WER_H_
