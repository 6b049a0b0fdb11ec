// cdr/diffusion.h

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

#ifndef CDR_DIFFUSION_H_
#define CDR_DIFFUSION_H_

#include <functional>
#include <vector>

#include "cdr/feature.h"
#include "cdr/schedule.h"

namespace cdr {

// Closed-form condition-shifted forward noising at step t:
//   Vt = sqrt(ab_t) V0 + (1 - sqrt(ab_t)) f + sqrt(1 - ab_t) eps
// Noise is always caller-supplied; these are pure functions.
FeatureSequence ForwardNoise(const FeatureSequence &v0,
                             const FeatureSequence &f_phi, int t,
                             const DiffusionSchedule &sched,
                             const FeatureSequence &eps);

// Algebraic inverse of ForwardNoise given a noise estimate:
//   V0_hat = (Vt - (1 - sqrt(ab_t)) f - sqrt(1 - ab_t) eps_pred) / sqrt(ab_t)
FeatureSequence PredictV0(const FeatureSequence &vt,
                          const FeatureSequence &eps_pred,
                          const FeatureSequence &f_phi, int t,
                          const DiffusionSchedule &sched);

// Posterior mean mu = lambda0 V0_hat + lambda1 Vt + lambda2 f at step t.
// Requires t >= 2; the t <= 1 boundary is handled by AncestralStep.
FeatureSequence PosteriorMean(const FeatureSequence &v0_hat,
                              const FeatureSequence &vt,
                              const FeatureSequence &f_phi, int t,
                              const DiffusionSchedule &sched);

// One reverse step: mu + sqrt(beta_tilde_t) eps for t > 1, V0_hat for t <= 1.
FeatureSequence AncestralStep(const FeatureSequence &v0_hat,
                              const FeatureSequence &vt,
                              const FeatureSequence &f_phi, int t,
                              const DiffusionSchedule &sched,
                              const FeatureSequence &eps);

// Strided timestep subsequence for accelerated sampling: K steps starting at
// t_max with stride floor(t_max / K). The loop treats the final listed step
// as the closing step (it returns V0_hat there, the t <= 1 boundary rule).
std::vector<int> DdimSubsequence(int t_max, int k);

// Noise-prediction callback: (current noisy state, step) -> eps estimate.
using EpsFn =
    std::function<FeatureSequence(const FeatureSequence &, int)>;

// Deterministic denoising over a strictly decreasing timestep list.
// Each iteration recovers V0_hat via PredictV0 and, unless at the final
// step, moves to the next listed step with the generalized posterior mean
// (the deterministic, zero-noise step update). Returns the final V0_hat.
FeatureSequence DenoiseLoop(const FeatureSequence &vt,
                            const FeatureSequence &f_phi, const EpsFn &eps_fn,
                            const DiffusionSchedule &sched,
                            const std::vector<int> &timesteps);

}  // namespace cdr

#endif  // CDR_DIFFUSION_H_
