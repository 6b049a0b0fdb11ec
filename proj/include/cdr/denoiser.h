// cdr/denoiser.h

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

#ifndef CDR_DENOISER_H_
#define CDR_DENOISER_H_

#include <cstdint>
#include <vector>

#include "cdr/feature.h"
#include "cdr/nn.h"

namespace cdr {

// The three representation streams sharing the denoiser trunk. Each has its
// own input projection; only the sequence stream receives the semantic
// condition.
enum class Stream { kSequence = 0, kTemporalCond = 1, kGlossCond = 2 };

// Noise-prediction network eps_theta: a small 1D temporal conv
// encoder/decoder (one downsample, `depth` bottom blocks, one upsample with
// a skip connection) over `width` channels, with a sinusoidal timestep
// embedding and an additive condition projection on the sequence stream.
//
// Input per call is the channel concatenation of the noisy and clean
// variables; output is a T x C noise estimate. The output projection is
// zero-initialized, so a fresh network predicts eps = 0.
class Denoiser {
 public:
  Denoiser() = default;

  static Denoiser Init(uint64_t seed, int channels, int width, int depth);

  int channels() const { return channels_; }
  int width() const { return width_; }
  int depth() const { return depth_; }

  nn::ParamRefs Params();

  // Cached forward state for one call; required by Backward.
  struct Cache {
    Mat x;        // T x 2C concat input
    Mat f;        // condition (empty if absent)
    Mat temb;     // 1 x W sinusoidal code
    Mat h;        // post-projection latent
    Mat c1, a1;   // conv_in pre/post activation
    Mat d0;       // pooled
    std::vector<Mat> b_in, b_pre;  // bottom block inputs / pre-activations
    Mat u, s2, c3, a3;
    int t = 0;
    Stream stream = Stream::kSequence;
    bool has_f = false;
    Eigen::Index time = 0;
  };

  // f_phi may be null (condition-free streams). Deterministic.
  Mat Forward(const Mat &noisy, const Mat &clean, const Mat *f_phi, int t,
              Stream stream, Cache *cache = nullptr) const;

  struct InputGrads {
    Mat noisy, clean, f_phi;  // f_phi empty when the call had no condition
  };

  // Exact reverse-mode gradients; accumulates into parameter grads and
  // returns gradients for every input of the cached call.
  InputGrads Backward(const Cache &cache, const Mat &gy);

  // Parameter count as a pure function of the shape configuration.
  static Eigen::Index ExpectedParamCount(int channels, int width, int depth);

 private:
  int channels_ = 0, width_ = 0, depth_ = 0;

  nn::Linear in_proj_[3];
  nn::Linear t_proj_;
  nn::Linear cond_proj_;
  nn::Conv1d conv_in_;
  std::vector<nn::Conv1d> bottom_;
  nn::Conv1d conv_out_;
  nn::Linear out_proj_;
};

}  // namespace cdr

#endif  // CDR_DENOISER_H_
