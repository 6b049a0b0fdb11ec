// cdr/optimizer.h

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

#ifndef CDR_OPTIMIZER_H_
#define CDR_OPTIMIZER_H_

#include <vector>

#include "cdr/nn.h"

namespace cdr {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;  // L2 term added to the gradient
};

// Adam with bias correction over a fixed parameter list. Step() consumes the
// accumulated grads and zeroes them afterwards.
class Adam {
 public:
  Adam() = default;
  Adam(nn::ParamRefs params, const AdamConfig &cfg);

  void Step();

  double lr() const { return cfg_.lr; }
  void set_lr(double lr) { cfg_.lr = lr; }

 private:
  nn::ParamRefs params_;
  AdamConfig cfg_;
  std::vector<Mat> m_, v_;
  long step_ = 0;
};

}  // namespace cdr

#endif  // CDR_OPTIMIZER_H_
