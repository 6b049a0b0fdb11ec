// cdr/nn.h

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

#ifndef CDR_NN_H_
#define CDR_NN_H_

#include <string>
#include <vector>

#include "cdr/feature.h"
#include "cdr/rng.h"

namespace cdr {
namespace nn {

// Named parameter with its gradient accumulator. All layers below
// accumulate into grad; callers zero it between steps.
struct Tensor {
  std::string name;
  Mat value;
  Mat grad;

  void Resize(Eigen::Index r, Eigen::Index c) {
    value = Mat::Zero(r, c);
    grad = Mat::Zero(r, c);
  }
  void ZeroGrad() { grad.setZero(); }
  Eigen::Index Count() const { return value.size(); }
};

using ParamRefs = std::vector<Tensor *>;

void ZeroGrads(const ParamRefs &params);
Eigen::Index CountParams(const ParamRefs &params);

// Pointwise (per-time-position) affine map, x: T x in -> T x out.
struct Linear {
  Tensor w;  // in x out
  Tensor b;  // 1 x out

  void Init(const std::string &prefix, int in, int out, Rng *rng);
  void InitZero(const std::string &prefix, int in, int out);
  Mat Forward(const Mat &x) const;
  // Accumulates parameter grads, returns grad w.r.t. x.
  Mat Backward(const Mat &x, const Mat &gy);
  void Collect(ParamRefs *out);
};

// Temporal convolution along the time axis, odd kernel, zero padding,
// length-preserving. Implemented via im2col so the core is a single GEMM.
struct Conv1d {
  int kernel = 0, in = 0, out = 0;
  Tensor w;  // (kernel * in) x out; tap d, channel c at row d * in + c
  Tensor b;  // 1 x out

  void Init(const std::string &prefix, int kernel, int in, int out, Rng *rng);
  Mat Forward(const Mat &x) const;
  Mat Backward(const Mat &x, const Mat &gy);
  void Collect(ParamRefs *out);
};

Mat Im2Col(const Mat &x, int kernel);

// SiLU activation x * sigmoid(x) and its input gradient.
Mat Silu(const Mat &x);
Mat SiluBackward(const Mat &x, const Mat &gy);

// Average pooling of width 2 with right-replication padding for odd T,
// and nearest-neighbor upsampling cropped back to the original length.
Mat DownPool2(const Mat &x);
Mat DownPool2Backward(Eigen::Index t_in, const Mat &gy);
Mat UpNearest2(const Mat &x, Eigen::Index t_out);
Mat UpNearest2Backward(Eigen::Index t_in, const Mat &gy);

// Sinusoidal position code of an integer step, 1 x dim.
Mat SinusoidalEmbedding(int t, int dim);

}  // namespace nn
}  // namespace cdr

#endif  // CDR_NN_H_
