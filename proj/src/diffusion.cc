// cdr/diffusion.cc

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

#include "cdr/diffusion.h"

#include <cmath>
#include <stdexcept>

namespace cdr {

FeatureSequence ForwardNoise(const FeatureSequence &v0,
                             const FeatureSequence &f_phi, int t,
                             const DiffusionSchedule &sched,
                             const FeatureSequence &eps) {
  sched.CheckStep(t);
  CheckSameShape(v0.data, f_phi.data, "ForwardNoise(v0, f_phi)");
  CheckSameShape(v0.data, eps.data, "ForwardNoise(v0, eps)");
  double ab = sched.AlphaBar(t);
  double sab = std::sqrt(ab);
  Mat out = sab * v0.data + (1.0 - sab) * f_phi.data +
            std::sqrt(1.0 - ab) * eps.data;
  return FeatureSequence(std::move(out), t);
}

FeatureSequence PredictV0(const FeatureSequence &vt,
                          const FeatureSequence &eps_pred,
                          const FeatureSequence &f_phi, int t,
                          const DiffusionSchedule &sched) {
  sched.CheckStep(t);
  CheckSameShape(vt.data, eps_pred.data, "PredictV0(vt, eps_pred)");
  CheckSameShape(vt.data, f_phi.data, "PredictV0(vt, f_phi)");
  double ab = sched.AlphaBar(t);
  double sab = std::sqrt(ab);
  Mat out = (vt.data - (1.0 - sab) * f_phi.data -
             std::sqrt(1.0 - ab) * eps_pred.data) /
            sab;
  return FeatureSequence(std::move(out), 0);
}

FeatureSequence PosteriorMean(const FeatureSequence &v0_hat,
                              const FeatureSequence &vt,
                              const FeatureSequence &f_phi, int t,
                              const DiffusionSchedule &sched) {
  if (t < 2)
    throw std::invalid_argument(
        "PosteriorMean requires t >= 2; use AncestralStep for the boundary");
  sched.CheckStep(t);
  CheckSameShape(v0_hat.data, vt.data, "PosteriorMean(v0_hat, vt)");
  CheckSameShape(v0_hat.data, f_phi.data, "PosteriorMean(v0_hat, f_phi)");
  Mat out = sched.Lambda0(t) * v0_hat.data + sched.Lambda1(t) * vt.data +
            sched.Lambda2(t) * f_phi.data;
  return FeatureSequence(std::move(out), t - 1);
}

FeatureSequence AncestralStep(const FeatureSequence &v0_hat,
                              const FeatureSequence &vt,
                              const FeatureSequence &f_phi, int t,
                              const DiffusionSchedule &sched,
                              const FeatureSequence &eps) {
  if (t <= 1) {
    FeatureSequence out = v0_hat;
    out.step_tag = 0;
    return out;
  }
  CheckSameShape(v0_hat.data, eps.data, "AncestralStep(v0_hat, eps)");
  FeatureSequence mu = PosteriorMean(v0_hat, vt, f_phi, t, sched);
  mu.data += std::sqrt(sched.BetaTilde(t)) * eps.data;
  mu.step_tag = t - 1;
  return mu;
}

std::vector<int> DdimSubsequence(int t_max, int k) {
  if (k < 1 || k > t_max)
    throw std::invalid_argument("DdimSubsequence requires 1 <= k <= t_max");
  int stride = t_max / k;
  std::vector<int> steps(k);
  for (int i = 0; i < k; ++i) steps[i] = t_max - i * stride;
  return steps;
}

FeatureSequence DenoiseLoop(const FeatureSequence &vt,
                            const FeatureSequence &f_phi, const EpsFn &eps_fn,
                            const DiffusionSchedule &sched,
                            const std::vector<int> &timesteps) {
  if (timesteps.empty())
    throw std::invalid_argument("DenoiseLoop: empty timestep list");
  for (size_t i = 1; i < timesteps.size(); ++i)
    if (timesteps[i] >= timesteps[i - 1])
      throw std::invalid_argument(
          "DenoiseLoop: timesteps must be strictly decreasing");

  FeatureSequence cur = vt;
  cur.step_tag = timesteps[0];
  FeatureSequence v0_hat;
  for (size_t i = 0; i < timesteps.size(); ++i) {
    int t = timesteps[i];
    FeatureSequence eps_pred = eps_fn(cur, t);
    v0_hat = PredictV0(cur, eps_pred, f_phi, t, sched);
    if (i + 1 == timesteps.size()) break;  // closing rule: emit V0_hat
    StepCoeffs c = PosteriorCoeffs(sched, t, timesteps[i + 1]);
    cur.data = c.lambda0 * v0_hat.data + c.lambda1 * cur.data +
               c.lambda2 * f_phi.data;
    cur.step_tag = timesteps[i + 1];
  }
  return v0_hat;
}

}  // namespace cdr
