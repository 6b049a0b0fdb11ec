// cdr/model.h

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

#ifndef CDR_MODEL_H_
#define CDR_MODEL_H_

#include <cstdint>

#include "cdr/feature.h"
#include "cdr/nn.h"

namespace cdr {

struct ModelDims {
  int c_in = 0;   // input frame channels
  int c_sp = 0;   // spatial feature width
  int c = 0;      // representation width (X_gwt and V)
  int vocab = 0;  // gloss count G; logits width is G + 1 (blank)
};

// Recognition backbone: a per-frame linear spatial map, a two-conv visual
// stage producing the gloss-wise temporal representation X_gwt, a two-conv
// sequence stage producing V, and a linear classifier to blank-augmented
// logits. All stages preserve the temporal length; gradients are exact
// reverse-mode through cached forward state.
class BaselineModel {
 public:
  BaselineModel() = default;

  static BaselineModel Init(uint64_t seed, const ModelDims &dims);

  const ModelDims &dims() const { return dims_; }

  nn::ParamRefs Params();

  struct Cache {
    Mat frames;
    Mat x_sp;
    Mat c1, a1;  // visual stage pre/post activation
    Mat x_gwt;
    Mat c2, a2;  // sequence stage pre/post activation
    Mat v;
    Eigen::Index time = 0;
  };

  struct Outputs {
    Mat x_sp, x_gwt, v, z;
  };

  Outputs Forward(const Mat &frames, Cache *cache = nullptr) const;

  // dz is the gradient w.r.t. the classifier logits; pass an empty matrix to
  // skip the classifier path (its gradients handled by the caller, e.g. when
  // the classifier consumed a refined sequence instead of V). dv_extra and
  // dxgwt_extra inject additional gradients arriving at V and X_gwt from
  // outside the CTC path. Returns the gradient w.r.t. the input frames.
  Mat Backward(const Cache &cache, const Mat &dz, const Mat *dv_extra,
               const Mat *dxgwt_extra);

  // Direct access for modes that classify something other than V.
  nn::Linear &classifier() { return classifier_; }
  const nn::Linear &classifier() const { return classifier_; }

 private:
  ModelDims dims_;
  nn::Linear spatial_;
  nn::Conv1d conv_v1_, conv_v2_;  // visual stage
  nn::Conv1d conv_s1_, conv_s2_;  // sequence stage
  nn::Linear classifier_;
};

}  // namespace cdr

#endif  // CDR_MODEL_H_
