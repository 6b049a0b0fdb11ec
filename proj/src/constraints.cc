// cdr/constraints.cc

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

#include "cdr/constraints.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdr {

void KernelSpec::Check() const {
  if (bandwidths.empty())
    throw std::invalid_argument("KernelSpec: bandwidth list is empty");
  for (double s : bandwidths)
    if (!(s > 0.0))
      throw std::invalid_argument("KernelSpec: bandwidths must be positive");
}

KernelSpec MedianHeuristicKernel(const Mat &a, const Mat &b,
                                 int num_bandwidths) {
  std::vector<double> dists;
  Mat pooled(a.rows() + b.rows(), a.cols());
  pooled << a, b;
  for (Eigen::Index i = 0; i < pooled.rows(); ++i)
    for (Eigen::Index j = i + 1; j < pooled.rows(); ++j)
      dists.push_back((pooled.row(i) - pooled.row(j)).norm());
  double med = 1.0;
  if (!dists.empty()) {
    std::nth_element(dists.begin(), dists.begin() + dists.size() / 2,
                     dists.end());
    med = dists[dists.size() / 2];
    if (!(med > 0.0)) med = 1.0;
  }
  KernelSpec k;
  for (int i = 0; i < num_bandwidths; ++i) {
    double expo = i - (num_bandwidths - 1) / 2.0;
    k.bandwidths.push_back(med * std::pow(2.0, expo));
  }
  return k;
}

double NoiseLoss(const Mat &eps_pred, const Mat &eps) {
  CheckSameShape(eps_pred, eps, "NoiseLoss");
  return (eps - eps_pred).squaredNorm() / eps.size();
}

Mat NoiseLossGrad(const Mat &eps_pred, const Mat &eps) {
  CheckSameShape(eps_pred, eps, "NoiseLossGrad");
  return 2.0 * (eps_pred - eps) / eps.size();
}

// Mixture-averaged Gram matrix between rows of X and Y.
static Mat Gram(const Mat &x, const Mat &y, const KernelSpec &k) {
  Mat g = Mat::Zero(x.rows(), y.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
      double d2 = (x.row(i) - y.row(j)).squaredNorm();
      double v = 0.0;
      for (double s : k.bandwidths) v += std::exp(-d2 / (2.0 * s * s));
      g(i, j) = v / k.bandwidths.size();
    }
  return g;
}

static double MmdFromGrams(const Mat &gaa, const Mat &gbb, const Mat &gab,
                           bool biased) {
  Eigen::Index m = gaa.rows(), n = gbb.rows();
  double cross = 2.0 * gab.sum() / (static_cast<double>(m) * n);
  if (biased)
    return gaa.sum() / (static_cast<double>(m) * m) +
           gbb.sum() / (static_cast<double>(n) * n) - cross;
  if (m < 2 || n < 2)
    throw std::invalid_argument("unbiased MMD needs >= 2 rows per side");
  return (gaa.sum() - gaa.trace()) / (static_cast<double>(m) * (m - 1)) +
         (gbb.sum() - gbb.trace()) / (static_cast<double>(n) * (n - 1)) -
         cross;
}

double Mmd(const Mat &a, const Mat &b, const KernelSpec &k) {
  k.Check();
  if (a.cols() != b.cols())
    throw std::invalid_argument("Mmd: channel mismatch");
  return MmdFromGrams(Gram(a, a, k), Gram(b, b, k), Gram(a, b, k), k.biased);
}

// d k(x, y) / dx for the mixture, as a coefficient on (x - y):
// sum_s exp(-d2 / 2 s^2) * (-1 / s^2), averaged over bandwidths.
static double KernelGradCoeff(double d2, const KernelSpec &k) {
  double v = 0.0;
  for (double s : k.bandwidths) v += -std::exp(-d2 / (2.0 * s * s)) / (s * s);
  return v / k.bandwidths.size();
}

Mat MmdGradA(const Mat &a, const Mat &b, const KernelSpec &k) {
  k.Check();
  Eigen::Index m = a.rows(), n = b.rows();
  Mat g = Mat::Zero(m, a.cols());
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j == i) continue;
      Eigen::RowVectorXd diff = a.row(i) - a.row(j);
      g.row(i) += (2.0 / (static_cast<double>(m) * m)) *
                  KernelGradCoeff(diff.squaredNorm(), k) * diff;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::RowVectorXd diff = a.row(i) - b.row(j);
      g.row(i) -= (2.0 / (static_cast<double>(m) * n)) *
                  KernelGradCoeff(diff.squaredNorm(), k) * diff;
    }
  }
  return g;
}

static void CheckLayers(const std::vector<Mat> &la, const std::vector<Mat> &lb,
                        const std::vector<KernelSpec> &ks) {
  if (la.empty() || la.size() != lb.size() || la.size() != ks.size())
    throw std::invalid_argument("Jmmd: layer/kernel list mismatch");
  for (size_t l = 0; l < la.size(); ++l) {
    ks[l].Check();
    if (la[l].rows() != la[0].rows() || lb[l].rows() != lb[0].rows())
      throw std::invalid_argument("Jmmd: inconsistent sample counts");
    if (la[l].cols() != lb[l].cols())
      throw std::invalid_argument("Jmmd: per-layer channel mismatch");
  }
}

double Jmmd(const std::vector<Mat> &la, const std::vector<Mat> &lb,
            const std::vector<KernelSpec> &ks) {
  CheckLayers(la, lb, ks);
  Eigen::Index m = la[0].rows(), n = lb[0].rows();
  Mat gaa = Mat::Ones(m, m), gbb = Mat::Ones(n, n), gab = Mat::Ones(m, n);
  for (size_t l = 0; l < la.size(); ++l) {
    gaa = gaa.cwiseProduct(Gram(la[l], la[l], ks[l]));
    gbb = gbb.cwiseProduct(Gram(lb[l], lb[l], ks[l]));
    gab = gab.cwiseProduct(Gram(la[l], lb[l], ks[l]));
  }
  return MmdFromGrams(gaa, gbb, gab, ks[0].biased);
}

std::vector<Mat> JmmdGradA(const std::vector<Mat> &la,
                           const std::vector<Mat> &lb,
                           const std::vector<KernelSpec> &ks) {
  CheckLayers(la, lb, ks);
  size_t num_layers = la.size();
  Eigen::Index m = la[0].rows(), n = lb[0].rows();

  std::vector<Mat> gram_aa(num_layers), gram_ab(num_layers);
  for (size_t l = 0; l < num_layers; ++l) {
    gram_aa[l] = Gram(la[l], la[l], ks[l]);
    gram_ab[l] = Gram(la[l], lb[l], ks[l]);
  }

  std::vector<Mat> grads(num_layers);
  for (size_t l = 0; l < num_layers; ++l) {
    // Product of the other layers' Grams.
    Mat rest_aa = Mat::Ones(m, m), rest_ab = Mat::Ones(m, n);
    for (size_t o = 0; o < num_layers; ++o) {
      if (o == l) continue;
      rest_aa = rest_aa.cwiseProduct(gram_aa[o]);
      rest_ab = rest_ab.cwiseProduct(gram_ab[o]);
    }
    Mat g = Mat::Zero(m, la[l].cols());
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        if (j == i) continue;
        Eigen::RowVectorXd diff = la[l].row(i) - la[l].row(j);
        g.row(i) += (2.0 / (static_cast<double>(m) * m)) * rest_aa(i, j) *
                    KernelGradCoeff(diff.squaredNorm(), ks[l]) * diff;
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::RowVectorXd diff = la[l].row(i) - lb[l].row(j);
        g.row(i) -= (2.0 / (static_cast<double>(m) * n)) * rest_ab(i, j) *
                    KernelGradCoeff(diff.squaredNorm(), ks[l]) * diff;
      }
    }
    grads[l] = std::move(g);
  }
  return grads;
}

Measure ParseMeasure(const std::string &name) {
  if (name == "jmmd" || name == "JMMD") return Measure::kJmmd;
  if (name == "mmd" || name == "MMD") return Measure::kMmd;
  if (name == "mse" || name == "MSE") return Measure::kMse;
  throw std::invalid_argument("unknown measure name: " + name);
}

std::string MeasureName(Measure m) {
  switch (m) {
    case Measure::kJmmd: return "jmmd";
    case Measure::kMmd: return "mmd";
    case Measure::kMse: return "mse";
  }
  return "?";
}

double SemanticConstraint(const Mat &v0_hat, const Mat &v, Measure measure,
                          const KernelSpec &kernel) {
  CheckSameShape(v0_hat, v, "SemanticConstraint");
  switch (measure) {
    case Measure::kMse:
      return NoiseLoss(v0_hat, v);
    case Measure::kMmd:
      return Mmd(v0_hat, v, kernel);
    case Measure::kJmmd:
      return Jmmd({v0_hat}, {v}, {kernel});
  }
  throw std::logic_error("unreachable");
}

Mat SemanticConstraintGrad(const Mat &v0_hat, const Mat &v, Measure measure,
                           const KernelSpec &kernel) {
  CheckSameShape(v0_hat, v, "SemanticConstraintGrad");
  switch (measure) {
    case Measure::kMse:
      return NoiseLossGrad(v0_hat, v);
    case Measure::kMmd:
      return MmdGradA(v0_hat, v, kernel);
    case Measure::kJmmd:
      return JmmdGradA({v0_hat}, {v}, {kernel})[0];
  }
  throw std::logic_error("unreachable");
}

LossBreakdown AcdrObjective(double l_eps, double l_sc, double gamma1,
                            double gamma2) {
  if (gamma1 < 0.0 || gamma2 < 0.0)
    throw std::invalid_argument("AcdrObjective: gammas must be >= 0");
  LossBreakdown lb;
  lb.l_eps = l_eps;
  lb.l_sc = l_sc;
  lb.gamma1 = gamma1;
  lb.gamma2 = gamma2;
  lb.total = gamma1 * l_eps + gamma2 * l_sc;
  return lb;
}

}  // namespace cdr
