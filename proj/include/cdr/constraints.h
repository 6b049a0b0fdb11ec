// cdr/constraints.h

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

#ifndef CDR_CONSTRAINTS_H_
#define CDR_CONSTRAINTS_H_

#include <string>
#include <vector>

#include "cdr/feature.h"

namespace cdr {

// Gaussian-RBF kernel mixture, k(x, y) = mean_s exp(-|x-y|^2 / (2 s^2))
// over the listed bandwidths s.
struct KernelSpec {
  std::vector<double> bandwidths;
  bool biased = true;

  void Check() const;
};

// Bandwidths geometrically spaced around the median pairwise distance of the
// pooled samples (the median heuristic).
KernelSpec MedianHeuristicKernel(const Mat &a, const Mat &b,
                                 int num_bandwidths = 5);

// Mean squared residual over all entries.
double NoiseLoss(const Mat &eps_pred, const Mat &eps);
Mat NoiseLossGrad(const Mat &eps_pred, const Mat &eps);  // w.r.t. eps_pred

// (Multi-kernel) squared MMD between row-samples of A and B. The biased
// estimator is guaranteed >= 0; the unbiased one needs >= 2 rows per side.
double Mmd(const Mat &a, const Mat &b, const KernelSpec &k);
// Gradient of the biased estimator w.r.t. the rows of A.
Mat MmdGradA(const Mat &a, const Mat &b, const KernelSpec &k);

// Joint MMD: per-layer Gram matrices are multiplied elementwise (product
// kernel across layers) before the MMD means are taken. With one layer this
// is exactly Mmd.
double Jmmd(const std::vector<Mat> &layers_a, const std::vector<Mat> &layers_b,
            const std::vector<KernelSpec> &kernels);
// Gradients of the biased joint estimator w.r.t. every A layer.
std::vector<Mat> JmmdGradA(const std::vector<Mat> &layers_a,
                           const std::vector<Mat> &layers_b,
                           const std::vector<KernelSpec> &kernels);

enum class Measure { kJmmd, kMmd, kMse };

Measure ParseMeasure(const std::string &name);
std::string MeasureName(Measure m);

// Feature-distribution distance D(v0_hat, v). The kernel spec is treated as
// fixed (no gradient through bandwidth selection).
double SemanticConstraint(const Mat &v0_hat, const Mat &v, Measure measure,
                          const KernelSpec &kernel);
// Gradient w.r.t. v0_hat only; v is the fixed reference.
Mat SemanticConstraintGrad(const Mat &v0_hat, const Mat &v, Measure measure,
                           const KernelSpec &kernel);

// Component accounting of one training objective evaluation.
struct LossBreakdown {
  double l_eps = 0.0;
  double l_sc = 0.0;
  double l_ctc = 0.0;
  double total = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

// total = gamma1 * l_eps + gamma2 * l_sc; the pipeline adds l_ctc on top.
LossBreakdown AcdrObjective(double l_eps, double l_sc, double gamma1,
                            double gamma2);

}  // namespace cdr

#endif  // CDR_CONSTRAINTS_H_
