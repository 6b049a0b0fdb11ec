// cdr/schedule.h

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

#ifndef CDR_SCHEDULE_H_
#define CDR_SCHEDULE_H_

#include <vector>

namespace cdr {

// Precomputed per-step quantities of a diffusion noise schedule.
// All vectors are 1-based conceptually; index [t-1] holds step t.
//
//   alpha[t]      = 1 - beta[t]
//   alpha_bar[t]  = prod_{s<=t} alpha[s]
//   beta_tilde[t] = (1 - alpha_bar[t-1]) / (1 - alpha_bar[t]) * beta[t]
//
// The lambda coefficients form the posterior mean of the condition-shifted
// forward process,
//   mu = lambda0 * V0 + lambda1 * Vt + lambda2 * f,
// and satisfy lambda0 + lambda1 + lambda2 = 1 identically.
// For t = 1 the posterior references alpha_bar[0], taken as 1 (empty product).
struct DiffusionSchedule {
  int t_max = 0;
  std::vector<double> beta;
  std::vector<double> alpha;
  std::vector<double> alpha_bar;
  std::vector<double> beta_tilde;
  std::vector<double> lambda0, lambda1, lambda2;

  double Beta(int t) const { return beta[t - 1]; }
  double Alpha(int t) const { return alpha[t - 1]; }
  double AlphaBar(int t) const { return t == 0 ? 1.0 : alpha_bar[t - 1]; }
  double BetaTilde(int t) const { return beta_tilde[t - 1]; }
  double Lambda0(int t) const { return lambda0[t - 1]; }
  double Lambda1(int t) const { return lambda1[t - 1]; }
  double Lambda2(int t) const { return lambda2[t - 1]; }

  void CheckStep(int t) const;
};

// Posterior-style coefficients for a jump from step t down to step t_prev
// (0 <= t_prev < t). t_prev = t - 1 reproduces the per-step lambda vectors;
// larger jumps are used by the strided deterministic sampler.
struct StepCoeffs {
  double lambda0, lambda1, lambda2;
  double beta_tilde;
};

StepCoeffs PosteriorCoeffs(const DiffusionSchedule &sched, int t, int t_prev);

// Linear beta schedule, endpoints inclusive. Throws std::invalid_argument
// on out-of-range endpoints or t_max < 1.
DiffusionSchedule MakeLinearSchedule(double beta_start, double beta_end,
                                     int t_max);

}  // namespace cdr

#endif  // CDR_SCHEDULE_H_
