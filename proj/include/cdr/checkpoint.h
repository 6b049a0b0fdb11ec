// cdr/checkpoint.h

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

#ifndef CDR_CHECKPOINT_H_
#define CDR_CHECKPOINT_H_

#include <cstdint>
#include <string>

#include "cdr/denoiser.h"
#include "cdr/model.h"

namespace cdr {

struct CheckpointMeta {
  ModelDims dims;
  int denoiser_width = 0;
  int denoiser_depth = 0;
  std::string mode = "baseline";
  uint64_t seed = 0;
  int epoch = 0;
};

// File format: one JSON header line (meta plus an ordered parameter table of
// name/rows/cols), a newline, then the little-endian float32 values of every
// parameter in table order (model parameters first, then the denoiser).
void SaveCheckpoint(const std::string &path, BaselineModel *model,
                    Denoiser *denoiser, const CheckpointMeta &meta);

struct LoadedCheckpoint {
  BaselineModel model;
  Denoiser denoiser;
  CheckpointMeta meta;
};

// Validates the parameter table against freshly constructed shapes.
LoadedCheckpoint LoadCheckpoint(const std::string &path);

}  // namespace cdr

#endif  // CDR_CHECKPOINT_H_
