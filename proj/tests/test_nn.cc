// tests/test_nn.cc

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

#include "cdr/nn.h"

#include "doctest.h"

using cdr::Mat;
using cdr::Rng;
namespace nn = cdr::nn;

namespace {

// Central finite difference of a scalar function of one matrix entry.
template <typename F>
double Fd(F f, Mat *m, int i, int j, double h = 1e-6) {
  double orig = (*m)(i, j);
  (*m)(i, j) = orig + h;
  double fp = f();
  (*m)(i, j) = orig - h;
  double fm = f();
  (*m)(i, j) = orig;
  return (fp - fm) / (2 * h);
}

}  // namespace

TEST_CASE("linear layer gradients") {
  Rng rng(1);
  nn::Linear lin;
  lin.Init("lin", 3, 2, &rng);
  Mat x = rng.NormalMat(5, 3);
  Mat gy = rng.NormalMat(5, 2);
  auto loss = [&] { return (lin.Forward(x).array() * gy.array()).sum(); };

  lin.w.ZeroGrad();
  lin.b.ZeroGrad();
  Mat gx = lin.Backward(x, gy);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(lin.w.grad(i, j) ==
            doctest::Approx(Fd(loss, &lin.w.value, i, j)).epsilon(1e-6));
  for (int j = 0; j < 2; ++j)
    CHECK(lin.b.grad(0, j) ==
          doctest::Approx(Fd(loss, &lin.b.value, 0, j)).epsilon(1e-6));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(gx(i, j) == doctest::Approx(Fd(loss, &x, i, j)).epsilon(1e-6));
}

TEST_CASE("conv1d gradients and length preservation") {
  Rng rng(2);
  nn::Conv1d conv;
  conv.Init("conv", 3, 2, 4, &rng);
  Mat x = rng.NormalMat(7, 2);
  CHECK(conv.Forward(x).rows() == 7);
  Mat gy = rng.NormalMat(7, 4);
  auto loss = [&] { return (conv.Forward(x).array() * gy.array()).sum(); };
  conv.w.ZeroGrad();
  conv.b.ZeroGrad();
  Mat gx = conv.Backward(x, gy);
  for (int i = 0; i < conv.w.value.rows(); ++i)
    for (int j = 0; j < conv.w.value.cols(); ++j)
      CHECK(conv.w.grad(i, j) ==
            doctest::Approx(Fd(loss, &conv.w.value, i, j)).epsilon(1e-6));
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(gx(i, j) == doctest::Approx(Fd(loss, &x, i, j)).epsilon(1e-6));
}

TEST_CASE("silu and pooling gradients") {
  Rng rng(3);
  Mat x = rng.NormalMat(5, 3);
  Mat gy = rng.NormalMat(5, 3);
  Mat gx = nn::SiluBackward(x, gy);
  auto loss = [&] { return (nn::Silu(x).array() * gy.array()).sum(); };
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(gx(i, j) == doctest::Approx(Fd(loss, &x, i, j)).epsilon(1e-6));

  for (int t : {6, 7}) {  // even and odd lengths
    Mat xi = rng.NormalMat(t, 2);
    Mat d = nn::DownPool2(xi);
    CHECK(d.rows() == (t + 1) / 2);
    Mat gyd = rng.NormalMat(d.rows(), 2);
    Mat gxd = nn::DownPool2Backward(t, gyd);
    auto dl = [&] { return (nn::DownPool2(xi).array() * gyd.array()).sum(); };
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(gxd(i, j) == doctest::Approx(Fd(dl, &xi, i, j)).epsilon(1e-6));

    Mat u = nn::UpNearest2(d, t);
    CHECK(u.rows() == t);
    Mat gyu = rng.NormalMat(t, 2);
    Mat gu = nn::UpNearest2Backward(d.rows(), gyu);
    auto ul = [&] { return (nn::UpNearest2(d, t).array() * gyu.array()).sum(); };
    for (int i = 0; i < d.rows(); ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(gu(i, j) == doctest::Approx(Fd(ul, &d, i, j)).epsilon(1e-6));
  }
}

TEST_CASE("sinusoidal embedding distinguishes steps") {
  for (int dim : {8, 16}) {
    Mat prev;
    for (int t = 1; t <= 100; ++t) {
      Mat e = nn::SinusoidalEmbedding(t, dim);
      CHECK(e.cols() == dim);
      if (prev.size() > 0) CHECK((e - prev).cwiseAbs().maxCoeff() > 1e-8);
      prev = e;
    }
    // Deterministic.
    CHECK((nn::SinusoidalEmbedding(5, dim) - nn::SinusoidalEmbedding(5, dim))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}
