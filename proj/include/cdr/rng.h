// cdr/rng.h

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

#ifndef CDR_RNG_H_
#define CDR_RNG_H_

#include <cmath>
#include <cstdint>

#include "cdr/feature.h"

namespace cdr {

// Deterministic generator with an explicitly owned state, so that results are
// bit-reproducible across runs and platforms. The standard-library
// distributions are implementation-defined; everything here is hand-rolled.
//
// Streams are derived by mixing (seed, purpose, index) through splitmix64,
// which keeps independent parts of the pipeline (data shuffling vs. diffusion
// noise draws) on non-interfering draw sequences.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {
    // Warm up so that small seeds do not produce correlated first draws.
    Next();
    Next();
  }

  static uint64_t Mix(uint64_t a, uint64_t b) {
    return SplitMix(a ^ (SplitMix(b) + 0x9e3779b97f4a7c15ULL));
  }

  // Derives an independent stream for (purpose, index) pairs.
  static Rng Stream(uint64_t seed, uint64_t purpose, uint64_t index) {
    return Rng(Mix(Mix(seed, purpose), index));
  }

  uint64_t Next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return SplitMix(state_);
  }

  // Uniform in [0, 1).
  double Uniform() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [lo, hi] inclusive.
  int64_t UniformInt(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(Next() % span);
  }

  // Standard normal via Box-Muller (no cached spare; simpler determinism).
  double Normal() {
    double u1 = Uniform();
    double u2 = Uniform();
    while (u1 <= 0.0) u1 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * M_PI * u2);
  }

  Mat NormalMat(Eigen::Index rows, Eigen::Index cols) {
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Normal();
    return m;
  }

 private:
  static uint64_t SplitMix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t state_;
};

// Named purposes for derived streams.
enum RngPurpose : uint64_t {
  kRngInit = 1,       // parameter initialization
  kRngShuffle = 2,    // batch order
  kRngDiffusion = 3,  // diffusion step and noise draws
  kRngData = 4,       // synthetic dataset generation
};

}  // namespace cdr

#endif  // CDR_RNG_H_
