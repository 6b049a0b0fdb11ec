// tests/acceptance.cc

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

// End-to-end acceptance gate. Each numbered check prints exactly one
// PASS/FAIL line; the process exits nonzero if any check fails. argv[1]
// must be the path to the cdrseq CLI binary (used by the determinism check).

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cdr/checkpoint.h"
#include "cdr/conditions.h"
#include "cdr/config.h"
#include "cdr/constraints.h"
#include "cdr/ctc.h"
#include "cdr/dataset.h"
#include "cdr/denoiser.h"
#include "cdr/diffusion.h"
#include "cdr/model.h"
#include "cdr/rng.h"
#include "cdr/train.h"
#include "cdr/wer.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace cdr;

namespace {

int g_failures = 0;

void Report(int idx, const std::string &name, bool ok,
            const std::string &detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << ": criterion " << idx << " - "
            << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

// ---------------------------------------------------------------------------
// 1. Diffusion identities.

bool Criterion1(std::string *detail) {
  bool ok = true;
  Rng rng(1);
  DiffusionSchedule sched = MakeLinearSchedule(1e-4, 0.02, 100);
  // Round trip over random draws at random steps.
  for (int rep = 0; rep < 50; ++rep) {
    Mat v0 = rng.NormalMat(6, 4), f = rng.NormalMat(6, 4),
        eps = rng.NormalMat(6, 4);
    int t = static_cast<int>(rng.UniformInt(1, 100));
    FeatureSequence vt = ForwardNoise(FeatureSequence(v0), FeatureSequence(f),
                                      t, sched, FeatureSequence(eps));
    FeatureSequence back = PredictV0(vt, FeatureSequence(eps),
                                     FeatureSequence(f), t, sched);
    ok &= (back.data - v0).cwiseAbs().maxCoeff() < 1e-10;
  }
  // Lambda partition of unity for three schedules.
  for (const DiffusionSchedule &s :
       {MakeLinearSchedule(1e-4, 0.02, 100), MakeLinearSchedule(1e-4, 0.02, 1000),
        MakeLinearSchedule(0.01, 0.2, 50)})
    for (int t = 1; t <= s.t_max; ++t)
      ok &= std::abs(s.Lambda0(t) + s.Lambda1(t) + s.Lambda2(t) - 1.0) < 1e-12;
  // Fixed point of the posterior mean.
  Mat c = Mat::Constant(5, 3, 0.7);
  FeatureSequence mu = PosteriorMean(FeatureSequence(c), FeatureSequence(c),
                                     FeatureSequence(c), 50, sched);
  ok &= (mu.data - c).cwiseAbs().maxCoeff() < 1e-12;
  *detail = "round-trip 1e-10, lambda sum 1e-12, fixed point";
  return ok;
}

// ---------------------------------------------------------------------------
// 2. Markov consistency of the composed single-step chain.

bool Criterion2(std::string *detail) {
  DiffusionSchedule sched = MakeLinearSchedule(1e-4, 0.02, 100);
  const double v0 = 1.0, f = 0.5;
  const int n = 100000;
  bool ok = true;
  std::ostringstream d;
  for (int t : {2, 10, 100}) {
    Rng rng(100 + t);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      double v = v0;
      for (int s = 1; s <= t; ++s)
        v = std::sqrt(sched.Alpha(s)) * v +
            (1.0 - std::sqrt(sched.Alpha(s))) * f +
            std::sqrt(sched.Beta(s)) * rng.Normal();
      sum += v;
      sumsq += v * v;
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    double sab = std::sqrt(sched.AlphaBar(t));
    double mean_exact = sab * v0 + (1.0 - sab) * f;
    double var_exact = 1.0 - sched.AlphaBar(t);
    double se_mean = std::sqrt(var_exact / n);
    double se_var = var_exact * std::sqrt(2.0 / (n - 1));
    ok &= std::abs(mean - mean_exact) < 3.0 * se_mean;
    ok &= std::abs(var - var_exact) < 3.0 * se_var;
    d << " t=" << t << " dmean=" << std::abs(mean - mean_exact)
      << " dvar=" << std::abs(var - var_exact);
  }
  *detail = "N=1e5, 3 standard errors;" + d.str();
  return ok;
}

// ---------------------------------------------------------------------------
// 3. CTC vs exhaustive path enumeration.

double CtcBruteForce(const Mat &logits, const GlossSequence &target) {
  const int t_len = static_cast<int>(logits.rows());
  const int k = static_cast<int>(logits.cols());
  Mat logp(t_len, k);
  for (int t = 0; t < t_len; ++t) {
    double mx = logits.row(t).maxCoeff();
    double z = std::log((logits.row(t).array() - mx).exp().sum()) + mx;
    logp.row(t) = logits.row(t).array() - z;
  }
  double total = 0.0;
  long count = 1;
  for (int t = 0; t < t_len; ++t) count *= k;
  std::vector<int> path(t_len);
  for (long code = 0; code < count; ++code) {
    long c = code;
    for (int t = 0; t < t_len; ++t) {
      path[t] = static_cast<int>(c % k);
      c /= k;
    }
    GlossSequence collapsed;
    int prev = -1;
    for (int t = 0; t < t_len; ++t) {
      if (path[t] != prev && path[t] != 0) collapsed.push_back(path[t]);
      prev = path[t];
    }
    if (collapsed != target) continue;
    double lp = 0.0;
    for (int t = 0; t < t_len; ++t) lp += logp(t, path[t]);
    total += std::exp(lp);
  }
  return -std::log(total);
}

bool Criterion3(std::string *detail) {
  Rng rng(3);
  bool ok = true;
  int draws = 0;
  double max_loss_err = 0.0, max_grad_err = 0.0;
  while (draws < 200) {
    int g = static_cast<int>(rng.UniformInt(1, 3));
    int l = static_cast<int>(rng.UniformInt(1, 3));
    GlossSequence target(l);
    for (int &id : target) id = static_cast<int>(rng.UniformInt(1, g));
    int t_min = CtcMinFrames(target);
    if (t_min > 6) continue;
    int t_len = static_cast<int>(rng.UniformInt(t_min, 6));
    Mat logits = rng.NormalMat(t_len, g + 1);
    ++draws;

    CtcResult r = CtcLoss(logits, target);
    max_loss_err =
        std::max(max_loss_err, std::abs(r.loss - CtcBruteForce(logits, target)));
    ok &= max_loss_err < 1e-9;

    // Finite-difference gradient on a sample of entries.
    const double h = 1e-6;
    for (int probe = 0; probe < 4; ++probe) {
      int i = static_cast<int>(rng.UniformInt(0, t_len - 1));
      int j = static_cast<int>(rng.UniformInt(0, g));
      double orig = logits(i, j);
      logits(i, j) = orig + h;
      double fp = CtcLoss(logits, target).loss;
      logits(i, j) = orig - h;
      double fm = CtcLoss(logits, target).loss;
      logits(i, j) = orig;
      double fd = (fp - fm) / (2 * h);
      double denom = std::max({std::abs(r.grad(i, j)), std::abs(fd), 1e-8});
      max_grad_err = std::max(max_grad_err, std::abs(r.grad(i, j) - fd) / denom);
      ok &= max_grad_err < 1e-4;
    }
  }
  std::ostringstream d;
  d << "200 draws, max loss err " << max_loss_err << ", max grad rel err "
    << max_grad_err;
  *detail = d.str();
  return ok;
}

// ---------------------------------------------------------------------------
// 4. WER vs exhaustive edit-script search.

int EditScriptMin(const GlossSequence &hyp, const GlossSequence &ref,
                  size_t i, size_t j) {
  // Plain recursion over all edit scripts; exponential but tiny inputs.
  if (i == hyp.size()) return static_cast<int>(ref.size() - j);
  if (j == ref.size()) return static_cast<int>(hyp.size() - i);
  int sub = EditScriptMin(hyp, ref, i + 1, j + 1) + (hyp[i] != ref[j] ? 1 : 0);
  int del = EditScriptMin(hyp, ref, i, j + 1) + 1;
  int ins = EditScriptMin(hyp, ref, i + 1, j) + 1;
  return std::min({sub, del, ins});
}

bool Criterion4(std::string *detail) {
  Rng rng(4);
  bool ok = true;
  for (int rep = 0; rep < 500; ++rep) {
    int hl = static_cast<int>(rng.UniformInt(0, 6));
    int rl = static_cast<int>(rng.UniformInt(1, 6));
    GlossSequence hyp(hl), ref(rl);
    for (int &v : hyp) v = static_cast<int>(rng.UniformInt(1, 4));
    for (int &v : ref) v = static_cast<int>(rng.UniformInt(1, 4));
    WerReport r = ComputeWer(hyp, ref);
    int oracle = EditScriptMin(hyp, ref, 0, 0);
    ok &= (r.sub + r.del + r.ins) == oracle;
    ok &= r.wer == static_cast<double>(r.sub + r.del + r.ins) / r.ref_len;
  }
  *detail = "500 random pairs, lengths <= 6";
  return ok;
}

// ---------------------------------------------------------------------------
// 5. Denoiser and backbone gradient checks.

bool Criterion5(std::string *detail) {
  const double h = 1e-5, tol = 1e-4;
  bool ok = true;
  double worst = 0.0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    // Denoiser.
    {
      Denoiser dn = Denoiser::Init(seed, 3, 8, 2);
      Rng prng(seed + 500);
      for (auto *p : dn.Params())
        p->value += 0.1 * prng.NormalMat(p->value.rows(), p->value.cols());
      Rng rng(seed);
      Mat noisy = rng.NormalMat(6, 3), clean = rng.NormalMat(6, 3),
          f = rng.NormalMat(6, 3), w = rng.NormalMat(6, 3);
      int t = static_cast<int>(rng.UniformInt(1, 50));
      Denoiser::Cache cache;
      dn.Forward(noisy, clean, &f, t, Stream::kSequence, &cache);
      nn::ZeroGrads(dn.Params());
      dn.Backward(cache, w);
      for (auto *p : dn.Params()) {
        int i = static_cast<int>(rng.UniformInt(0, p->value.rows() - 1));
        int j = static_cast<int>(rng.UniformInt(0, p->value.cols() - 1));
        double orig = p->value(i, j);
        p->value(i, j) = orig + h;
        double fp = (dn.Forward(noisy, clean, &f, t, Stream::kSequence)
                         .array() * w.array()).sum();
        p->value(i, j) = orig - h;
        double fm = (dn.Forward(noisy, clean, &f, t, Stream::kSequence)
                         .array() * w.array()).sum();
        p->value(i, j) = orig;
        double fd = (fp - fm) / (2 * h);
        double denom = std::max({std::abs(p->grad(i, j)), std::abs(fd), 1e-8});
        double err = std::abs(p->grad(i, j) - fd) / denom;
        worst = std::max(worst, err);
        ok &= err < tol;
      }
    }
    // Backbone, CTC end to end.
    {
      BaselineModel m = BaselineModel::Init(seed, ModelDims{3, 4, 3, 2});
      Rng rng(seed + 900);
      Mat frames = rng.NormalMat(8, 3);
      GlossSequence target = {1, 2};
      BaselineModel::Cache cache;
      auto outs = m.Forward(frames, &cache);
      auto ctc = CtcLoss(outs.z, target);
      nn::ZeroGrads(m.Params());
      m.Backward(cache, ctc.grad, nullptr, nullptr);
      for (auto *p : m.Params()) {
        int i = static_cast<int>(rng.UniformInt(0, p->value.rows() - 1));
        int j = static_cast<int>(rng.UniformInt(0, p->value.cols() - 1));
        double orig = p->value(i, j);
        p->value(i, j) = orig + h;
        double fp = CtcLoss(m.Forward(frames).z, target).loss;
        p->value(i, j) = orig - h;
        double fm = CtcLoss(m.Forward(frames).z, target).loss;
        p->value(i, j) = orig;
        double fd = (fp - fm) / (2 * h);
        double denom = std::max({std::abs(p->grad(i, j)), std::abs(fd), 1e-8});
        double err = std::abs(p->grad(i, j) - fd) / denom;
        worst = std::max(worst, err);
        ok &= err < tol;
      }
    }
  }
  std::ostringstream d;
  d << "20 seeds, worst rel err " << worst;
  *detail = d.str();
  return ok;
}

// ---------------------------------------------------------------------------
// 6. MMD/JMMD properties.

double MmdDoubleLoop(const Mat &a, const Mat &b, const KernelSpec &k) {
  auto kv = [&](int i, int j, const Mat &x, const Mat &y) {
    double d2 = (x.row(i) - y.row(j)).squaredNorm();
    double v = 0.0;
    for (double s : k.bandwidths) v += std::exp(-d2 / (2 * s * s));
    return v / k.bandwidths.size();
  };
  double aa = 0, bb = 0, ab = 0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.rows(); ++j) aa += kv(i, j, a, a);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.rows(); ++j) bb += kv(i, j, b, b);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.rows(); ++j) ab += kv(i, j, a, b);
  double m = a.rows(), n = b.rows();
  return aa / (m * m) + bb / (n * n) - 2 * ab / (m * n);
}

bool Criterion6(std::string *detail) {
  Rng rng(6);
  bool ok = true;
  KernelSpec k{{0.5, 1.0, 2.0}, true};
  for (int rep = 0; rep < 10; ++rep) {
    Mat a = rng.NormalMat(40, 3), b = rng.NormalMat(50, 3);
    ok &= std::abs(Mmd(a, a, k)) < 1e-12;
    ok &= std::abs(Mmd(a, b, k) - Mmd(b, a, k)) < 1e-12;
    ok &= Jmmd({a}, {b}, {k}) == Mmd(a, b, k);
    ok &= std::abs(Mmd(a, b, k) - MmdDoubleLoop(a, b, k)) < 1e-12;
  }
  *detail = "self-distance, symmetry, single-layer identity, oracle 1e-12";
  return ok;
}

// ---------------------------------------------------------------------------
// Shared synthetic configuration for criteria 7-9.

Config AcceptanceConfig(const std::string &mode, uint64_t seed) {
  Config cfg;
  cfg.train.mode = mode;
  cfg.train.seed = seed;
  cfg.train.lr = 3e-3;
  cfg.train.epochs = 30;
  cfg.train.decay_epochs = {15, 24};
  cfg.train.batch_size = 4;
  cfg.train.c_sp = 16;
  cfg.train.c = 8;
  cfg.train.denoiser_width = 16;
  cfg.train.denoiser_depth = 2;
  cfg.data.vocab = 12;
  cfg.data.c_in = 8;
  cfg.data.train_utterances = 400;
  cfg.data.dev_utterances = 50;
  cfg.data.test_utterances = 50;
  cfg.data.l_min = 3;
  cfg.data.l_max = 6;
  cfg.data.d_min = 4;
  cfg.data.d_max = 8;
  cfg.data.seed = 5;
  return cfg;
}

bool Criterion7(std::string *detail) {
  Config base_cfg = AcceptanceConfig("baseline", 1);
  Config acdr_cfg = AcceptanceConfig("acdr", 1);
  acdr_cfg.train.gamma1 = 0.0;
  acdr_cfg.train.gamma2 = 0.0;
  // A reduced corpus keeps the 10 controlled steps quick.
  base_cfg.data.train_utterances = 16;
  acdr_cfg.data.train_utterances = 16;
  base_cfg.data.dev_utterances = base_cfg.data.test_utterances = 2;
  acdr_cfg.data.dev_utterances = acdr_cfg.data.test_utterances = 2;

  Dataset ds = GenerateDataset(base_cfg.data);
  Trainer base(base_cfg, &ds);
  Trainer acdr(acdr_cfg, &ds);
  bool ok = true;
  for (int step = 0; step < 10; ++step) {
    std::vector<int> batch;
    for (int i = 0; i < 4; ++i) batch.push_back((4 * step + i) % 16);
    base.TrainStep(batch, 1 + step / 4);
    acdr.TrainStep(batch, 1 + step / 4);
    auto pb = base.model().Params();
    auto pa = acdr.model().Params();
    for (size_t i = 0; i < pa.size(); ++i)
      ok &= (pa[i]->value.array() == pb[i]->value.array()).all();
  }
  *detail = "10 steps, model parameters bit-identical";
  return ok;
}

struct RunSummary {
  double best_dev_wer = 1e9;
  double mmd_epoch5 = 0.0;
  bool finite = true;
};

RunSummary RunMode(const Config &cfg, const Dataset &ds, const fs::path &dir) {
  Trainer tr(cfg, &ds);
  auto records = tr.Run(dir.string());
  RunSummary s;
  for (const auto &r : records) {
    s.best_dev_wer = std::min(s.best_dev_wer, r.dev_wer);
    if (r.epoch == 5) s.mmd_epoch5 = r.mmd_v0hat_v;
    s.finite &= std::isfinite(r.l_ctc) && std::isfinite(r.l_eps) &&
                std::isfinite(r.l_sc) && std::isfinite(r.total);
  }
  return s;
}

bool Criterion8And9(const fs::path &work, std::string *d8, std::string *d9,
                    bool *ok9) {
  Dataset ds = GenerateDataset(AcceptanceConfig("baseline", 1).data);

  RunSummary base =
      RunMode(AcceptanceConfig("baseline", 1), ds, work / "run_baseline");
  std::vector<double> acdr_wers;
  double acdr_mmd5 = 0.0;
  bool acdr_finite = true;
  for (uint64_t seed : {1, 2, 3}) {
    RunSummary s = RunMode(AcceptanceConfig("acdr", seed), ds,
                           work / ("run_acdr_" + std::to_string(seed)));
    acdr_wers.push_back(s.best_dev_wer);
    acdr_finite &= s.finite;
    if (seed == 1) acdr_mmd5 = s.mmd_epoch5;
  }
  std::sort(acdr_wers.begin(), acdr_wers.end());
  double median = acdr_wers[1];

  bool ok8 = base.best_dev_wer < 0.30 && acdr_finite &&
             median <= base.best_dev_wer + 0.02;
  std::ostringstream o8;
  o8 << "baseline best dev WER " << base.best_dev_wer << ", acdr median "
     << median << " (seeds: " << acdr_wers[0] << "/" << acdr_wers[1] << "/"
     << acdr_wers[2] << ")";
  *d8 = o8.str();

  // Criterion 9: CDR's epoch-5 MMD(V0_hat, V) exceeds ACDR's.
  Config cdr_cfg = AcceptanceConfig("cdr", 1);
  cdr_cfg.train.epochs = 5;
  RunSummary cdr = RunMode(cdr_cfg, ds, work / "run_cdr");
  *ok9 = cdr.mmd_epoch5 > acdr_mmd5;
  std::ostringstream o9;
  o9 << "epoch-5 MMD: cdr " << cdr.mmd_epoch5 << " vs acdr " << acdr_mmd5;
  *d9 = o9.str();
  return ok8;
}

// ---------------------------------------------------------------------------
// 10. CLI determinism.

std::string ReadAll(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<missing:" + p.string() + ">";
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

// metrics.jsonl carries a wall_seconds measurement; normalize it before
// comparing, everything else must match byte for byte.
std::string NormalizeMetrics(const std::string &text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    j["wall_seconds"] = 0.0;
    out << j.dump() << "\n";
  }
  return out.str();
}

int Shell(const std::string &cmd) { return std::system(cmd.c_str()); }

bool Criterion10(const std::string &cli, const fs::path &work,
                 std::string *detail) {
  fs::path dir = work / "determinism";
  fs::create_directories(dir);

  // Small config so two full train runs stay cheap.
  Config cfg = AcceptanceConfig("acdr", 3);
  cfg.train.epochs = 2;
  cfg.data.train_utterances = 12;
  cfg.data.dev_utterances = 4;
  cfg.data.test_utterances = 4;
  std::ofstream(dir / "c.cfg") << SerializeConfig(cfg);

  std::string cfg_arg = " --config " + (dir / "c.cfg").string();
  bool ok = true;
  auto q = [](const fs::path &p) { return p.string(); };

  for (int round = 0; round < 2; ++round) {
    std::string r = std::to_string(round);
    fs::path data = dir / ("data" + r);
    fs::path run = dir / ("run" + r);
    ok &= Shell(cli + " gen-data" + cfg_arg + " --out " + q(data) +
                " > /dev/null") == 0;
    ok &= Shell(cli + " train" + cfg_arg + " --data " + q(data) + " --out " +
                q(run) + " > /dev/null") == 0;
    ok &= Shell(cli + " eval --ckpt " + q(run / "best.ckpt") + " --data " +
                q(data) + " --split test > " + q(dir / ("eval" + r + ".json"))) ==
          0;
    ok &= Shell(cli + " sample" + cfg_arg + " --ckpt " + q(run / "best.ckpt") +
                " --data " + q(data) + " --split dev --utt 0 --out " +
                q(dir / ("sample" + r + ".csv")) + " > /dev/null") == 0;
    ok &= Shell(cli + " export-sim --ckpt " + q(run / "best.ckpt") +
                " --data " + q(data) + " --split dev --utt 1 --out " +
                q(dir / ("sim" + r)) + " > /dev/null") == 0;
  }
  if (!ok) {
    *detail = "a CLI invocation failed";
    return false;
  }

  std::ostringstream bad;
  auto same = [&](const fs::path &a, const fs::path &b) {
    bool eq = ReadAll(a) == ReadAll(b);
    if (!eq) bad << " " << a.filename().string();
    return eq;
  };
  for (const char *rel :
       {"manifest.json", "codebook.bin", "train/frames.bin",
        "train/index.json", "dev/frames.bin", "dev/index.json",
        "test/frames.bin", "test/index.json"})
    ok &= same(dir / "data0" / rel, dir / "data1" / rel);
  for (const char *rel : {"best.ckpt", "last.ckpt"})
    ok &= same(dir / "run0" / rel, dir / "run1" / rel);
  {
    bool eq = NormalizeMetrics(ReadAll(dir / "run0" / "metrics.jsonl")) ==
              NormalizeMetrics(ReadAll(dir / "run1" / "metrics.jsonl"));
    if (!eq) bad << " metrics.jsonl";
    ok &= eq;
  }
  ok &= same(dir / "eval0.json", dir / "eval1.json");
  ok &= same(dir / "sample0.csv", dir / "sample1.csv");
  for (const char *rel : {"xgwt_self.csv", "v_self.csv", "v_xgwt_cross.csv"})
    ok &= same(dir / "sim0" / rel, dir / "sim1" / rel);

  *detail = ok ? "all subcommands byte-identical (wall_seconds normalized)"
              : "mismatch:" + bad.str();
  return ok;
}

}  // namespace

int main(int argc, char **argv) {
  if (argc < 2) {
    std::cerr << "usage: cdr_acceptance <path-to-cdrseq-binary>\n";
    return 2;
  }
  std::string cli = argv[1];
  fs::path work = fs::temp_directory_path() / "cdrseq_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  std::string detail;
  Report(1, "diffusion identities", Criterion1(&detail), detail);
  Report(2, "Markov chain consistency", Criterion2(&detail), detail);
  Report(3, "CTC path-enumeration equivalence", Criterion3(&detail), detail);
  Report(4, "WER edit-script equivalence", Criterion4(&detail), detail);
  Report(5, "denoiser and backbone gradients", Criterion5(&detail), detail);
  Report(6, "MMD/JMMD properties", Criterion6(&detail), detail);
  Report(7, "regularizer-off reduction", Criterion7(&detail), detail);

  std::string d8, d9;
  bool ok9 = false;
  bool ok8 = Criterion8And9(work, &d8, &d9, &ok9);
  Report(8, "end-to-end synthetic training", ok8, d8);
  Report(9, "CDR failure diagnostic", ok9, d9);

  Report(10, "CLI determinism", Criterion10(cli, work, &detail), detail);

  fs::remove_all(work);
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                : "FAILURES: " + std::to_string(g_failures))
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}
