// cdr/wer.cc

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

#include "cdr/wer.h"

#include <stdexcept>
#include <vector>

namespace cdr {

WerReport ComputeWer(const GlossSequence &hyp, const GlossSequence &ref) {
  if (ref.empty()) throw std::invalid_argument("ComputeWer: empty reference");
  const size_t n_ref = ref.size(), n_hyp = hyp.size();

  // d[i][j]: cost of aligning first i reference words with first j
  // hypothesis words.
  std::vector<std::vector<int>> d(n_ref + 1, std::vector<int>(n_hyp + 1, 0));
  for (size_t i = 0; i <= n_ref; ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= n_hyp; ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n_ref; ++i)
    for (size_t j = 1; j <= n_hyp; ++j) {
      int match = d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      int del = d[i - 1][j] + 1;
      int ins = d[i][j - 1] + 1;
      d[i][j] = std::min(match, std::min(del, ins));
    }

  // Backtrace, tie order: substitution/match, then deletion, then insertion.
  WerReport r;
  r.ref_len = static_cast<int>(n_ref);
  size_t i = n_ref, j = n_hyp;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        d[i][j] == d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      if (ref[i - 1] != hyp[j - 1]) ++r.sub;
      --i;
      --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++r.del;
      --i;
    } else {
      ++r.ins;
      --j;
    }
  }
  r.wer = static_cast<double>(r.sub + r.del + r.ins) / r.ref_len;
  return r;
}

}  // namespace cdr
