// cdr/config.h

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

#ifndef CDR_CONFIG_H_
#define CDR_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cdr/constraints.h"

namespace cdr {

// Training hyperparameters (train.* and diffusion.* config keys).
struct TrainConfig {
  std::string mode = "baseline";  // baseline | cdr | acdr
  double tau = 0.4;
  double gamma1 = 0.5;
  double gamma2 = 0.1;
  Measure measure = Measure::kJmmd;

  int t_noise = 100;
  int ddim_steps = 20;
  double beta_start = 1e-4;
  double beta_end = 0.02;

  double lr = 1e-4;
  double weight_decay = 1e-4;
  int batch_size = 4;
  int epochs = 30;
  std::vector<int> decay_epochs = {15, 24};
  double decay_factor = 0.2;
  uint64_t seed = 0;

  // Model widths (model.* keys).
  int c_sp = 16;
  int c = 8;
  int denoiser_width = 16;
  int denoiser_depth = 2;
};

// Synthetic corpus description (data.* config keys).
struct SyntheticDatasetSpec {
  int vocab = 12;
  int c_in = 8;
  uint64_t codebook_seed = 42;
  uint64_t seed = 0;
  int train_utterances = 400;
  int dev_utterances = 50;
  int test_utterances = 50;
  int l_min = 3, l_max = 6;  // gloss-sequence length range
  int d_min = 4, d_max = 8;  // per-gloss duration range, frames
  double noise_sigma = 0.1;
  int smooth_width = 1;  // moving-average window; 1 = no smoothing
};

struct Config {
  TrainConfig train;
  SyntheticDatasetSpec data;
};

// Flat key=value text, one pair per line, keys prefixed by section
// (train.*, diffusion.*, model.*, data.*). '#' starts a comment. Unknown
// keys and out-of-range values are rejected with the key named in the error.
Config ParseConfig(const std::string &text);
Config LoadConfig(const std::string &path);

// Deterministic full serialization; ParseConfig(SerializeConfig(c)) == c.
std::string SerializeConfig(const Config &cfg);

void ValidateConfig(const Config &cfg);

}  // namespace cdr

#endif  // CDR_CONFIG_H_
