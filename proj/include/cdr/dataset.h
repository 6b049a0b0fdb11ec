// cdr/dataset.h

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

#ifndef CDR_DATASET_H_
#define CDR_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cdr/conditions.h"
#include "cdr/config.h"
#include "cdr/ctc.h"

namespace cdr {

struct Utterance {
  Mat frames;  // T x C_in
  GlossSequence labels;
};

// Synthetic corpus: each utterance is a random gloss sequence rendered as
// repeated codebook prototypes with additive noise and optional temporal
// smoothing. Frame values are quantized to float32 at generation time so the
// in-memory corpus equals its on-disk round trip exactly.
struct Dataset {
  SyntheticDatasetSpec spec;
  Codebook codebook;
  std::vector<Utterance> train, dev, test;

  const std::vector<Utterance> &Split(const std::string &name) const;
};

// Deterministic in spec: per-utterance RNG streams, disjoint across splits.
// Every utterance satisfies the CTC feasibility bound by construction.
Dataset GenerateDataset(const SyntheticDatasetSpec &spec);

// Layout under `dir`: manifest.json (spec, codebook descriptor, checksums),
// codebook.bin (float64 LE), and per split {train,dev,test}/frames.bin
// (float32 LE, row-major, concatenated) + index.json (offsets, lengths,
// labels).
void SaveDataset(const Dataset &ds, const std::string &dir);

// Verifies manifest checksums against file contents.
Dataset LoadDataset(const std::string &dir);

// FNV-1a 64-bit checksum of a byte buffer, as used in the manifest.
uint64_t Fnv1a(const std::string &bytes);

}  // namespace cdr

#endif  // CDR_DATASET_H_
