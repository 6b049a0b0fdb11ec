// src/model.cc

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

#include "cdr/model.h"

#include <stdexcept>

namespace cdr {

BaselineModel BaselineModel::Init(uint64_t seed, const ModelDims &dims) {
  if (dims.c_in < 1 || dims.c_sp < 1 || dims.c < 1 || dims.vocab < 1)
    throw std::invalid_argument("BaselineModel: all dims must be positive");
  BaselineModel m;
  m.dims_ = dims;
  Rng rng = Rng::Stream(seed, kRngInit, 1);
  m.spatial_.Init("spatial", dims.c_in, dims.c_sp, &rng);
  m.conv_v1_.Init("conv_v1", 3, dims.c_sp, dims.c, &rng);
  m.conv_v2_.Init("conv_v2", 3, dims.c, dims.c, &rng);
  m.conv_s1_.Init("conv_s1", 3, dims.c, dims.c, &rng);
  m.conv_s2_.Init("conv_s2", 3, dims.c, dims.c, &rng);
  m.classifier_.Init("classifier", dims.c, dims.vocab + 1, &rng);
  return m;
}

nn::ParamRefs BaselineModel::Params() {
  nn::ParamRefs out;
  spatial_.Collect(&out);
  conv_v1_.Collect(&out);
  conv_v2_.Collect(&out);
  conv_s1_.Collect(&out);
  conv_s2_.Collect(&out);
  classifier_.Collect(&out);
  return out;
}

BaselineModel::Outputs BaselineModel::Forward(const Mat &frames,
                                              Cache *cache) const {
  if (frames.cols() != dims_.c_in)
    throw std::invalid_argument("BaselineModel::Forward: channel mismatch");
  CheckFinite(frames, "frames");

  Mat x_sp = spatial_.Forward(frames);
  Mat c1 = conv_v1_.Forward(x_sp);
  Mat a1 = nn::Silu(c1);
  Mat x_gwt = conv_v2_.Forward(a1);
  Mat c2 = conv_s1_.Forward(x_gwt);
  Mat a2 = nn::Silu(c2);
  Mat v = conv_s2_.Forward(a2);
  Mat z = classifier_.Forward(v);

  if (cache) {
    cache->frames = frames;
    cache->x_sp = x_sp;
    cache->c1 = c1;
    cache->a1 = a1;
    cache->x_gwt = x_gwt;
    cache->c2 = c2;
    cache->a2 = a2;
    cache->v = v;
    cache->time = frames.rows();
  }
  return Outputs{std::move(x_sp), std::move(x_gwt), std::move(v),
                 std::move(z)};
}

Mat BaselineModel::Backward(const Cache &cache, const Mat &dz,
                            const Mat *dv_extra, const Mat *dxgwt_extra) {
  if (cache.time == 0)
    throw std::logic_error("BaselineModel::Backward: empty cache");

  Mat dv = Mat::Zero(cache.time, dims_.c);
  if (dz.size() > 0) dv = classifier_.Backward(cache.v, dz);
  if (dv_extra) dv += *dv_extra;

  Mat da2 = conv_s2_.Backward(cache.a2, dv);
  Mat dc2 = nn::SiluBackward(cache.c2, da2);
  Mat dxgwt = conv_s1_.Backward(cache.x_gwt, dc2);
  if (dxgwt_extra) dxgwt += *dxgwt_extra;

  Mat da1 = conv_v2_.Backward(cache.a1, dxgwt);
  Mat dc1 = nn::SiluBackward(cache.c1, da1);
  Mat dx_sp = conv_v1_.Backward(cache.x_sp, dc1);
  return spatial_.Backward(cache.frames, dx_sp);
}

}  // namespace cdr
