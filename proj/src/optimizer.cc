// src/optimizer.cc

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

#include "cdr/optimizer.h"

#include <cmath>
#include <stdexcept>

namespace cdr {

Adam::Adam(nn::ParamRefs params, const AdamConfig &cfg)
    : params_(std::move(params)), cfg_(cfg) {
  if (cfg_.lr < 0.0 || cfg_.weight_decay < 0.0)
    throw std::invalid_argument("Adam: negative lr or weight decay");
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (auto *p : params_) {
    m_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::Step() {
  ++step_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
  for (size_t i = 0; i < params_.size(); ++i) {
    nn::Tensor *p = params_[i];
    Mat g = p->grad + cfg_.weight_decay * p->value;
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
    v_[i] = cfg_.beta2 * v_[i] +
            (1.0 - cfg_.beta2) * g.cwiseProduct(g);
    Mat m_hat = m_[i] / bc1;
    Mat v_hat = v_[i] / bc2;
    p->value.array() -=
        cfg_.lr * m_hat.array() / (v_hat.array().sqrt() + cfg_.eps);
    p->grad.setZero();
  }
}

}  // namespace cdr
