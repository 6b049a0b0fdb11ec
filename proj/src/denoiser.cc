// cdr/denoiser.cc

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

#include "cdr/denoiser.h"

#include <stdexcept>
#include <string>

namespace cdr {

using nn::Conv1d;
using nn::Linear;

Denoiser Denoiser::Init(uint64_t seed, int channels, int width, int depth) {
  if (channels < 1 || width < 1 || depth < 1)
    throw std::invalid_argument("Denoiser: channels, width, depth must be >= 1");
  Denoiser d;
  d.channels_ = channels;
  d.width_ = width;
  d.depth_ = depth;
  Rng rng = Rng::Stream(seed, kRngInit, 0);
  const char *stream_names[3] = {"in_proj.seq", "in_proj.tc", "in_proj.gc"};
  for (int s = 0; s < 3; ++s)
    d.in_proj_[s].Init(stream_names[s], 2 * channels, width, &rng);
  d.t_proj_.Init("t_proj", width, width, &rng);
  d.cond_proj_.Init("cond_proj", channels, width, &rng);
  d.conv_in_.Init("conv_in", 3, width, width, &rng);
  d.bottom_.resize(depth);
  for (int i = 0; i < depth; ++i)
    d.bottom_[i].Init("bottom." + std::to_string(i), 3, width, width, &rng);
  d.conv_out_.Init("conv_out", 3, width, width, &rng);
  d.out_proj_.InitZero("out_proj", width, channels);
  return d;
}

nn::ParamRefs Denoiser::Params() {
  nn::ParamRefs p;
  for (int s = 0; s < 3; ++s) in_proj_[s].Collect(&p);
  t_proj_.Collect(&p);
  cond_proj_.Collect(&p);
  conv_in_.Collect(&p);
  for (auto &c : bottom_) c.Collect(&p);
  conv_out_.Collect(&p);
  out_proj_.Collect(&p);
  return p;
}

Eigen::Index Denoiser::ExpectedParamCount(int c, int w, int d) {
  Eigen::Index n = 0;
  n += 3 * (2LL * c * w + w);             // stream input projections
  n += 1LL * w * w + w;                   // timestep projection
  n += 1LL * c * w + w;                   // condition projection
  n += (d + 2) * (3LL * w * w + w);       // conv_in, bottom blocks, conv_out
  n += 1LL * w * c + c;                   // output projection
  return n;
}

Mat Denoiser::Forward(const Mat &noisy, const Mat &clean, const Mat *f_phi,
                      int t, Stream stream, Cache *cache) const {
  CheckSameShape(noisy, clean, "Denoiser::Forward(noisy, clean)");
  if (noisy.cols() != channels_)
    throw std::invalid_argument("Denoiser::Forward: channel mismatch");
  if (f_phi) CheckSameShape(noisy, *f_phi, "Denoiser::Forward(noisy, f_phi)");
  if (t < 1) throw std::invalid_argument("Denoiser::Forward: t must be >= 1");

  Eigen::Index time = noisy.rows();
  Mat x(time, 2 * channels_);
  x.leftCols(channels_) = noisy;
  x.rightCols(channels_) = clean;

  const Linear &ip = in_proj_[static_cast<int>(stream)];
  Mat temb = nn::SinusoidalEmbedding(t, width_);
  Mat h = ip.Forward(x);
  h.rowwise() += t_proj_.Forward(temb).row(0);
  if (f_phi) h += cond_proj_.Forward(*f_phi);

  Mat c1 = conv_in_.Forward(h);
  Mat a1 = nn::Silu(c1);
  Mat d0 = nn::DownPool2(a1);

  std::vector<Mat> b_in, b_pre;
  Mat b_cur = d0;
  for (const Conv1d &blk : bottom_) {
    b_in.push_back(b_cur);
    Mat pre = blk.Forward(b_cur);
    b_pre.push_back(pre);
    b_cur = nn::Silu(pre);
  }
  Mat u = nn::UpNearest2(b_cur, time);
  Mat s2 = u + a1;
  Mat c3 = conv_out_.Forward(s2);
  Mat a3 = nn::Silu(c3);
  Mat y = out_proj_.Forward(a3);

  if (cache) {
    cache->x = std::move(x);
    cache->f = f_phi ? *f_phi : Mat();
    cache->temb = std::move(temb);
    cache->h = std::move(h);
    cache->c1 = std::move(c1);
    cache->a1 = std::move(a1);
    cache->d0 = std::move(d0);
    cache->b_in = std::move(b_in);
    cache->b_pre = std::move(b_pre);
    cache->u = std::move(u);
    cache->s2 = std::move(s2);
    cache->c3 = std::move(c3);
    cache->a3 = std::move(a3);
    cache->t = t;
    cache->stream = stream;
    cache->has_f = (f_phi != nullptr);
    cache->time = time;
  }
  return y;
}

Denoiser::InputGrads Denoiser::Backward(const Cache &cache, const Mat &gy) {
  if (cache.time == 0)
    throw std::logic_error("Denoiser::Backward called without cached state");

  Mat ga3 = out_proj_.Backward(cache.a3, gy);
  Mat gc3 = nn::SiluBackward(cache.c3, ga3);
  Mat gs2 = conv_out_.Backward(cache.s2, gc3);

  // s2 = u + a1
  Mat gb = nn::UpNearest2Backward(cache.d0.rows(), gs2);
  for (int i = depth_ - 1; i >= 0; --i) {
    Mat gpre = nn::SiluBackward(cache.b_pre[i], gb);
    gb = bottom_[i].Backward(cache.b_in[i], gpre);
  }
  Mat ga1 = gs2 + nn::DownPool2Backward(cache.time, gb);
  Mat gc1 = nn::SiluBackward(cache.c1, ga1);
  Mat gh = conv_in_.Backward(cache.h, gc1);

  InputGrads grads;
  if (cache.has_f) grads.f_phi = cond_proj_.Backward(cache.f, gh);

  Mat gtrow(1, width_);
  gtrow.row(0) = gh.colwise().sum();
  t_proj_.Backward(cache.temb, gtrow);

  Mat gx = in_proj_[static_cast<int>(cache.stream)].Backward(cache.x, gh);
  grads.noisy = gx.leftCols(channels_);
  grads.clean = gx.rightCols(channels_);
  return grads;
}

}  // namespace cdr
