// cdr/feature.h

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

#ifndef CDR_FEATURE_H_
#define CDR_FEATURE_H_

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace cdr {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// A time-by-channel real matrix. Rows are time positions, columns are
// channels. step_tag records the diffusion step the content is noised to;
// -1 means "not a noisy variable".
struct FeatureSequence {
  Mat data;
  int step_tag = -1;

  FeatureSequence() = default;
  explicit FeatureSequence(Mat m, int tag = -1)
      : data(std::move(m)), step_tag(tag) {}

  Eigen::Index Time() const { return data.rows(); }
  Eigen::Index Channels() const { return data.cols(); }
};

inline void CheckFinite(const Mat &m, const std::string &what) {
  if (!m.allFinite())
    throw std::invalid_argument(what + ": non-finite entries");
}

inline void CheckSameShape(const Mat &a, const Mat &b,
                           const std::string &what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(
        what + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
        std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
        std::to_string(b.cols()) + ")");
}

}  // namespace cdr

#endif  // CDR_FEATURE_H_
