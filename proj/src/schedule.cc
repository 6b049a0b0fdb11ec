// cdr/schedule.cc

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

#include "cdr/schedule.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cdr {

void DiffusionSchedule::CheckStep(int t) const {
  if (t < 1 || t > t_max)
    throw std::invalid_argument("diffusion step t=" + std::to_string(t) +
                                " out of range [1, " + std::to_string(t_max) +
                                "]");
}

StepCoeffs PosteriorCoeffs(const DiffusionSchedule &sched, int t, int t_prev) {
  sched.CheckStep(t);
  if (t_prev < 0 || t_prev >= t)
    throw std::invalid_argument("t_prev must lie in [0, t)");
  double ab_t = sched.AlphaBar(t);
  double ab_p = sched.AlphaBar(t_prev);
  // Effective one-jump retention from t_prev to t.
  double a_eff = ab_t / ab_p;
  double b_eff = 1.0 - a_eff;
  StepCoeffs c;
  c.lambda0 = b_eff * std::sqrt(ab_p) / (1.0 - ab_t);
  c.lambda1 = (1.0 - ab_p) * std::sqrt(a_eff) / (1.0 - ab_t);
  c.lambda2 = 1.0 + (std::sqrt(ab_t) - 1.0) *
                        (std::sqrt(a_eff) + std::sqrt(ab_p)) / (1.0 - ab_t);
  c.beta_tilde = (1.0 - ab_p) / (1.0 - ab_t) * b_eff;
  return c;
}

DiffusionSchedule MakeLinearSchedule(double beta_start, double beta_end,
                                     int t_max) {
  if (!(beta_start > 0.0) || !(beta_end < 1.0) || !(beta_start <= beta_end))
    throw std::invalid_argument(
        "linear schedule requires 0 < beta_start <= beta_end < 1");
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");

  DiffusionSchedule s;
  s.t_max = t_max;
  s.beta.resize(t_max);
  s.alpha.resize(t_max);
  s.alpha_bar.resize(t_max);
  s.beta_tilde.resize(t_max);
  s.lambda0.resize(t_max);
  s.lambda1.resize(t_max);
  s.lambda2.resize(t_max);

  double prod = 1.0;
  for (int t = 1; t <= t_max; ++t) {
    double frac = (t_max == 1) ? 0.0
                               : static_cast<double>(t - 1) / (t_max - 1);
    double b = beta_start + (beta_end - beta_start) * frac;
    s.beta[t - 1] = b;
    s.alpha[t - 1] = 1.0 - b;
    prod *= s.alpha[t - 1];
    s.alpha_bar[t - 1] = prod;
  }
  for (int t = 1; t <= t_max; ++t) {
    StepCoeffs c = PosteriorCoeffs(s, t, t - 1);
    s.beta_tilde[t - 1] = c.beta_tilde;
    s.lambda0[t - 1] = c.lambda0;
    s.lambda1[t - 1] = c.lambda1;
    s.lambda2[t - 1] = c.lambda2;
  }
  return s;
}

}  // namespace cdr
