// cdr/nn.cc

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

#include "cdr/nn.h"

#include <cmath>
#include <stdexcept>

namespace cdr {
namespace nn {

void ZeroGrads(const ParamRefs &params) {
  for (Tensor *p : params) p->ZeroGrad();
}

Eigen::Index CountParams(const ParamRefs &params) {
  Eigen::Index n = 0;
  for (const Tensor *p : params) n += p->Count();
  return n;
}

static Mat FanInNormal(Eigen::Index rows, Eigen::Index cols,
                       Eigen::Index fan_in, Rng *rng) {
  double sd = 1.0 / std::sqrt(static_cast<double>(fan_in));
  return sd * rng->NormalMat(rows, cols);
}

void Linear::Init(const std::string &prefix, int in, int out, Rng *rng) {
  w.name = prefix + ".w";
  b.name = prefix + ".b";
  w.Resize(in, out);
  b.Resize(1, out);
  w.value = FanInNormal(in, out, in, rng);
}

void Linear::InitZero(const std::string &prefix, int in, int out) {
  w.name = prefix + ".w";
  b.name = prefix + ".b";
  w.Resize(in, out);
  b.Resize(1, out);
}

Mat Linear::Forward(const Mat &x) const {
  return (x * w.value).rowwise() + b.value.row(0);
}

Mat Linear::Backward(const Mat &x, const Mat &gy) {
  w.grad += x.transpose() * gy;
  b.grad.row(0) += gy.colwise().sum();
  return gy * w.value.transpose();
}

void Linear::Collect(ParamRefs *out) {
  out->push_back(&w);
  out->push_back(&b);
}

void Conv1d::Init(const std::string &prefix, int kernel_, int in_, int out_,
                  Rng *rng) {
  if (kernel_ < 1 || kernel_ % 2 == 0)
    throw std::invalid_argument("Conv1d: kernel must be odd and >= 1");
  kernel = kernel_;
  in = in_;
  out = out_;
  w.name = prefix + ".w";
  b.name = prefix + ".b";
  w.Resize(kernel * in, out);
  b.Resize(1, out);
  w.value = FanInNormal(kernel * in, out, kernel * in, rng);
}

Mat Im2Col(const Mat &x, int kernel) {
  Eigen::Index t = x.rows(), c = x.cols();
  int half = kernel / 2;
  Mat cols = Mat::Zero(t, kernel * c);
  for (int d = 0; d < kernel; ++d) {
    int offset = d - half;
    Eigen::Index lo = std::max<Eigen::Index>(0, -offset);
    Eigen::Index hi = std::min<Eigen::Index>(t, t - offset);
    if (lo < hi)
      cols.block(lo, d * c, hi - lo, c) = x.block(lo + offset, 0, hi - lo, c);
  }
  return cols;
}

Mat Conv1d::Forward(const Mat &x) const {
  if (x.cols() != in) throw std::invalid_argument("Conv1d: channel mismatch");
  return (Im2Col(x, kernel) * w.value).rowwise() + b.value.row(0);
}

Mat Conv1d::Backward(const Mat &x, const Mat &gy) {
  Mat cols = Im2Col(x, kernel);
  w.grad += cols.transpose() * gy;
  b.grad.row(0) += gy.colwise().sum();
  Mat gcols = gy * w.value.transpose();
  // col2im scatter-add
  Eigen::Index t = x.rows(), c = x.cols();
  int half = kernel / 2;
  Mat gx = Mat::Zero(t, c);
  for (int d = 0; d < kernel; ++d) {
    int offset = d - half;
    Eigen::Index lo = std::max<Eigen::Index>(0, -offset);
    Eigen::Index hi = std::min<Eigen::Index>(t, t - offset);
    if (lo < hi)
      gx.block(lo + offset, 0, hi - lo, c) += gcols.block(lo, d * c, hi - lo, c);
  }
  return gx;
}

void Conv1d::Collect(ParamRefs *out) {
  out->push_back(&w);
  out->push_back(&b);
}

Mat Silu(const Mat &x) {
  return x.array() / (1.0 + (-x.array()).exp());
}

Mat SiluBackward(const Mat &x, const Mat &gy) {
  Eigen::ArrayXXd s = 1.0 / (1.0 + (-x.array()).exp());
  return gy.array() * s * (1.0 + x.array() * (1.0 - s));
}

Mat DownPool2(const Mat &x) {
  Eigen::Index t = x.rows();
  Eigen::Index t2 = (t + 1) / 2;
  Mat y(t2, x.cols());
  for (Eigen::Index i = 0; i < t2; ++i) {
    Eigen::Index j = std::min(2 * i + 1, t - 1);  // replicate last row if odd
    y.row(i) = 0.5 * (x.row(2 * i) + x.row(j));
  }
  return y;
}

Mat DownPool2Backward(Eigen::Index t_in, const Mat &gy) {
  Mat gx = Mat::Zero(t_in, gy.cols());
  for (Eigen::Index i = 0; i < gy.rows(); ++i) {
    Eigen::Index j = std::min(2 * i + 1, t_in - 1);
    gx.row(2 * i) += 0.5 * gy.row(i);
    gx.row(j) += 0.5 * gy.row(i);
  }
  return gx;
}

Mat UpNearest2(const Mat &x, Eigen::Index t_out) {
  Mat y(t_out, x.cols());
  for (Eigen::Index i = 0; i < t_out; ++i) y.row(i) = x.row(i / 2);
  return y;
}

Mat UpNearest2Backward(Eigen::Index t_in, const Mat &gy) {
  Mat gx = Mat::Zero(t_in, gy.cols());
  for (Eigen::Index i = 0; i < gy.rows(); ++i) gx.row(i / 2) += gy.row(i);
  return gx;
}

Mat SinusoidalEmbedding(int t, int dim) {
  Mat e(1, dim);
  int half = dim / 2;
  for (int i = 0; i < half; ++i) {
    double freq = std::exp(-std::log(10000.0) * i / std::max(1, half));
    e(0, 2 * i) = std::sin(t * freq);
    e(0, 2 * i + 1) = std::cos(t * freq);
  }
  if (dim % 2 == 1) e(0, dim - 1) = std::sin(t);
  return e;
}

}  // namespace nn
}  // namespace cdr
