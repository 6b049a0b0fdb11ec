// src/train.cc

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

#include "cdr/train.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "cdr/conditions.h"
#include "cdr/constraints.h"
#include "cdr/ctc.h"
#include "json.hpp"

namespace cdr {

namespace {

namespace fs = std::filesystem;

// Utterance stream block per epoch; train splits stay well under this.
constexpr uint64_t kEpochStride = 1000000;

// Fixed bandwidths for the logged MMD(V0_hat, V) diagnostic so the values
// are comparable across modes and epochs.
const KernelSpec kDiagnosticKernel{{0.5, 1.0, 2.0}, true};

std::vector<int> LoopTimesteps(int t_start, int t_noise, int ddim_steps) {
  std::vector<int> ts = {t_start};
  for (int s : DdimSubsequence(t_noise, ddim_steps))
    if (s < t_start) ts.push_back(s);
  return ts;
}

}  // namespace

std::string MetricsToJsonLine(const MetricsRecord &rec) {
  nlohmann::json j;
  j["epoch"] = rec.epoch;
  j["mode"] = rec.mode;
  j["l_ctc"] = rec.l_ctc;
  j["l_eps"] = rec.l_eps;
  j["l_sc"] = rec.l_sc;
  j["total"] = rec.total;
  j["dev_wer"] = rec.dev_wer;
  j["mmd_v0hat_v"] = rec.mmd_v0hat_v;
  j["wall_seconds"] = rec.wall_seconds;
  return j.dump();
}

Trainer::Trainer(const Config &cfg, const Dataset *data)
    : cfg_(cfg), data_(data) {
  ValidateConfig(cfg_);
  const TrainConfig &t = cfg_.train;
  if (t.mode != "baseline" && t.c != data->spec.c_in)
    throw std::invalid_argument(
        "Trainer: the gloss condition quantizes V against the data codebook, "
        "so model.c must equal data.c_in in cdr/acdr modes");
  sched_ = MakeLinearSchedule(t.beta_start, t.beta_end, t.t_noise);
  model_ = BaselineModel::Init(
      t.seed, ModelDims{data->spec.c_in, t.c_sp, t.c, data->spec.vocab});
  denoiser_ = Denoiser::Init(t.seed, t.c, t.denoiser_width, t.denoiser_depth);
  nn::ParamRefs params = model_.Params();
  nn::ParamRefs dn = denoiser_.Params();
  params.insert(params.end(), dn.begin(), dn.end());
  AdamConfig ac;
  ac.lr = t.lr;
  ac.weight_decay = t.weight_decay;
  opt_ = Adam(params, ac);
}

void Trainer::StepUtterance(const Utterance &utt, uint64_t stream_index,
                            double scale, LossBreakdown *acc, int *used) {
  const TrainConfig &tc = cfg_.train;
  if (static_cast<int>(utt.frames.rows()) < CtcMinFrames(utt.labels)) {
    std::cerr << "warning: skipping utterance with infeasible CTC target\n";
    return;
  }
  ++*used;

  BaselineModel::Cache mc;
  auto outs = model_.Forward(utt.frames, &mc);
  const Mat &v = outs.v;
  const Eigen::Index time = v.rows();
  const Eigen::Index chan = v.cols();

  if (tc.mode == "baseline") {
    auto ctc = CtcLoss(outs.z, utt.labels);
    Mat dz = scale * ctc.grad;
    model_.Backward(mc, dz, nullptr, nullptr);
    acc->l_ctc += ctc.loss;
    acc->total += ctc.loss;
    return;
  }

  // Semantic conditions.
  auto p_tc_fs = TemporalCondition(FeatureSequence(outs.x_gwt));
  const Mat &p_tc = p_tc_fs.data;
  Mat p_gc = GlossCondition(FeatureSequence(v), data_->codebook).data;
  Mat f = tc.tau * p_tc + (1.0 - tc.tau) * p_gc;

  // Noise draws from the per-utterance diffusion stream, fixed order.
  Rng rng = Rng::Stream(tc.seed, kRngDiffusion, stream_index);
  int t = static_cast<int>(rng.UniformInt(1, tc.t_noise));
  Mat eps_v = rng.NormalMat(time, chan);
  Mat eps_tc = rng.NormalMat(time, chan);
  Mat eps_gc = rng.NormalMat(time, chan);
  Mat zero = Mat::Zero(time, chan);

  double sab_t = std::sqrt(sched_.AlphaBar(t));
  Mat noisy_v = ForwardNoise(FeatureSequence(v), FeatureSequence(f), t, sched_,
                             FeatureSequence(eps_v))
                    .data;
  Mat noisy_tc = ForwardNoise(FeatureSequence(p_tc), FeatureSequence(zero), t,
                              sched_, FeatureSequence(eps_tc))
                     .data;
  Mat noisy_gc = ForwardNoise(FeatureSequence(p_gc), FeatureSequence(zero), t,
                              sched_, FeatureSequence(eps_gc))
                     .data;

  Denoiser::Cache cache_v, cache_tc, cache_gc;
  Mat pred_v =
      denoiser_.Forward(noisy_v, v, &f, t, Stream::kSequence, &cache_v);
  Mat pred_tc = denoiser_.Forward(noisy_tc, p_tc, nullptr, t,
                                  Stream::kTemporalCond, &cache_tc);
  Mat pred_gc = denoiser_.Forward(noisy_gc, p_gc, nullptr, t,
                                  Stream::kGlossCond, &cache_gc);
  double l_eps = NoiseLoss(pred_v, eps_v) + NoiseLoss(pred_tc, eps_tc) +
                 NoiseLoss(pred_gc, eps_gc);

  // Accumulators for gradients reaching the backbone.
  Mat g_v = Mat::Zero(time, chan);
  Mat g_f = Mat::Zero(time, chan);
  Mat g_p_tc = Mat::Zero(time, chan);
  Mat g_noisy_v = Mat::Zero(time, chan);
  bool any_extra = false;

  if (tc.gamma1 > 0.0) {
    any_extra = true;
    double w = tc.gamma1 * scale;
    auto ig_v = denoiser_.Backward(cache_v, w * NoiseLossGrad(pred_v, eps_v));
    g_noisy_v += ig_v.noisy;
    g_v += ig_v.clean;
    g_f += ig_v.f_phi;
    auto ig_tc =
        denoiser_.Backward(cache_tc, w * NoiseLossGrad(pred_tc, eps_tc));
    // noisy_tc depends on p_tc both directly and through the clean input;
    // the gloss stream's inputs sit behind the argmin and get no gradient.
    g_p_tc += ig_tc.clean + sab_t * ig_tc.noisy;
    denoiser_.Backward(cache_gc, w * NoiseLossGrad(pred_gc, eps_gc));
  }

  // Strided deterministic denoise loop from the sampled step.
  std::vector<int> ts = LoopTimesteps(t, tc.t_noise, tc.ddim_steps);
  const int k = static_cast<int>(ts.size());
  std::vector<Mat> states(k), v0hats(k);
  std::vector<Denoiser::Cache> caches(k);
  Mat v0_hat;
  if (use_oracle_eps_) {
    v0_hat = PredictV0(FeatureSequence(noisy_v), FeatureSequence(eps_v),
                       FeatureSequence(f), t, sched_)
                 .data;
  } else {
    states[0] = noisy_v;
    for (int i = 0; i < k; ++i) {
      Mat eps_i = denoiser_.Forward(states[i], v, &f, ts[i],
                                    Stream::kSequence, &caches[i]);
      v0hats[i] = PredictV0(FeatureSequence(states[i]),
                            FeatureSequence(eps_i), FeatureSequence(f), ts[i],
                            sched_)
                      .data;
      if (i + 1 < k) {
        StepCoeffs c = PosteriorCoeffs(sched_, ts[i], ts[i + 1]);
        states[i + 1] =
            c.lambda0 * v0hats[i] + c.lambda1 * states[i] + c.lambda2 * f;
      }
    }
    v0_hat = v0hats[k - 1];
  }

  mmd_sum_ += Mmd(v0_hat, v, kDiagnosticKernel);
  ++mmd_count_;

  double l_sc = 0.0;
  double l_ctc = 0.0;
  Mat g_v0 = Mat();

  if (tc.mode == "acdr") {
    KernelSpec kernel = MedianHeuristicKernel(v0_hat, v);
    l_sc = SemanticConstraint(v0_hat, v, tc.measure, kernel);
    auto ctc = CtcLoss(outs.z, utt.labels);
    l_ctc = ctc.loss;
    if (tc.gamma2 > 0.0) {
      any_extra = true;
      g_v0 = (tc.gamma2 * scale) *
             SemanticConstraintGrad(v0_hat, v, tc.measure, kernel);
    }
    Mat dz = scale * ctc.grad;
    if (any_extra) {
      // Backbone gradients from the diffusion paths are filled in below and
      // passed as extras; dz handled together with them after the loop
      // backward. Stash dz via the common exit at the bottom.
      // (fallthrough)
      acc->l_ctc += l_ctc;
      acc->l_eps += l_eps;
      acc->l_sc += l_sc;
      acc->total += tc.gamma1 * l_eps + tc.gamma2 * l_sc + l_ctc;
      // Loop backward for the semantic constraint.
      if (g_v0.size() > 0 && !use_oracle_eps_) {
        std::vector<Mat> gs(k, zero), gv0(k, zero);
        gv0[k - 1] = g_v0;
        for (int i = k - 1; i >= 0; --i) {
          double sab_i = std::sqrt(sched_.AlphaBar(ts[i]));
          double q_i = std::sqrt(1.0 - sched_.AlphaBar(ts[i]));
          gs[i] += gv0[i] / sab_i;
          g_f += (-(1.0 - sab_i) / sab_i) * gv0[i];
          auto ig = denoiser_.Backward(caches[i], (-q_i / sab_i) * gv0[i]);
          gs[i] += ig.noisy;
          g_v += ig.clean;
          g_f += ig.f_phi;
          if (i == 0) {
            g_noisy_v += gs[0];
          } else {
            StepCoeffs c = PosteriorCoeffs(sched_, ts[i - 1], ts[i]);
            gv0[i - 1] += c.lambda0 * gs[i];
            gs[i - 1] += c.lambda1 * gs[i];
            g_f += c.lambda2 * gs[i];
          }
        }
      } else if (g_v0.size() > 0) {
        // Oracle path: V0_hat is the single-step algebraic inverse.
        g_noisy_v += g_v0 / sab_t;
        g_f += (-(1.0 - sab_t) / sab_t) * g_v0;
      }
      g_v += sab_t * g_noisy_v;
      g_f += (1.0 - sab_t) * g_noisy_v;
      g_p_tc += tc.tau * g_f;
      Mat dxgwt_extra = TemporalConditionBackward(p_tc, g_p_tc);
      model_.Backward(mc, dz, &g_v, &dxgwt_extra);
    } else {
      // Regularizers off: identical accumulation order to baseline mode.
      model_.Backward(mc, dz, nullptr, nullptr);
      acc->l_ctc += l_ctc;
      acc->l_eps += l_eps;
      acc->l_sc += l_sc;
      acc->total += l_ctc;
    }
    return;
  }

  // CDR: the classifier consumes V0_hat; no semantic constraint.
  auto ctc = CtcLoss(model_.classifier().Forward(v0_hat), utt.labels);
  l_ctc = ctc.loss;
  g_v0 = model_.classifier().Backward(v0_hat, scale * ctc.grad);
  if (!use_oracle_eps_) {
    std::vector<Mat> gs(k, zero), gv0(k, zero);
    gv0[k - 1] = g_v0;
    for (int i = k - 1; i >= 0; --i) {
      double sab_i = std::sqrt(sched_.AlphaBar(ts[i]));
      double q_i = std::sqrt(1.0 - sched_.AlphaBar(ts[i]));
      gs[i] += gv0[i] / sab_i;
      g_f += (-(1.0 - sab_i) / sab_i) * gv0[i];
      auto ig = denoiser_.Backward(caches[i], (-q_i / sab_i) * gv0[i]);
      gs[i] += ig.noisy;
      g_v += ig.clean;
      g_f += ig.f_phi;
      if (i == 0) {
        g_noisy_v += gs[0];
      } else {
        StepCoeffs c = PosteriorCoeffs(sched_, ts[i - 1], ts[i]);
        gv0[i - 1] += c.lambda0 * gs[i];
        gs[i - 1] += c.lambda1 * gs[i];
        g_f += c.lambda2 * gs[i];
      }
    }
  } else {
    g_noisy_v += g_v0 / sab_t;
    g_f += (-(1.0 - sab_t) / sab_t) * g_v0;
  }
  g_v += sab_t * g_noisy_v;
  g_f += (1.0 - sab_t) * g_noisy_v;
  g_p_tc += tc.tau * g_f;
  Mat dxgwt_extra = TemporalConditionBackward(p_tc, g_p_tc);
  model_.Backward(mc, Mat(), &g_v, &dxgwt_extra);
  acc->l_ctc += l_ctc;
  acc->l_eps += l_eps;
  acc->total += tc.gamma1 * l_eps + l_ctc;
}

LossBreakdown Trainer::TrainStep(const std::vector<int> &batch, int epoch) {
  LossBreakdown acc;
  acc.gamma1 = cfg_.train.gamma1;
  acc.gamma2 = cfg_.train.gamma2;
  if (batch.empty()) return acc;

  int feasible = 0;
  for (int idx : batch)
    if (static_cast<int>(data_->train[idx].frames.rows()) >=
        CtcMinFrames(data_->train[idx].labels))
      ++feasible;
  if (feasible == 0) {
    std::cerr << "warning: batch with no feasible utterances\n";
    return acc;
  }
  double scale = 1.0 / feasible;

  int used = 0;
  for (int idx : batch)
    StepUtterance(data_->train[idx],
                  static_cast<uint64_t>(epoch) * kEpochStride +
                      static_cast<uint64_t>(idx),
                  scale, &acc, &used);
  opt_.Step();

  for (auto *p : model_.Params())
    if (!p->value.allFinite())
      throw std::runtime_error("TrainStep: non-finite parameter " + p->name);
  for (auto *p : denoiser_.Params())
    if (!p->value.allFinite())
      throw std::runtime_error("TrainStep: non-finite parameter " + p->name);
  return acc;
}

WerReport Trainer::Evaluate(const std::vector<Utterance> &split) const {
  if (split.empty())
    throw std::invalid_argument("Evaluate: empty split");
  WerReport agg;
  for (const auto &utt : split) {
    auto outs = model_.Forward(utt.frames);
    WerReport r = ComputeWer(CtcGreedyDecode(outs.z), utt.labels);
    agg.sub += r.sub;
    agg.del += r.del;
    agg.ins += r.ins;
    agg.ref_len += r.ref_len;
  }
  agg.wer = static_cast<double>(agg.sub + agg.del + agg.ins) / agg.ref_len;
  return agg;
}

double Trainer::EpochMmdDiagnostic() const {
  return mmd_count_ == 0 ? 0.0 : mmd_sum_ / static_cast<double>(mmd_count_);
}

void Trainer::ResetMmdDiagnostic() {
  mmd_sum_ = 0.0;
  mmd_count_ = 0;
}

std::vector<MetricsRecord> Trainer::Run(const std::string &out_dir) {
  const TrainConfig &tc = cfg_.train;
  fs::create_directories(out_dir);
  std::ofstream metrics(fs::path(out_dir) / "metrics.jsonl");
  if (!metrics)
    throw std::runtime_error("Run: cannot write metrics in " + out_dir);

  CheckpointMeta meta;
  meta.dims = model_.dims();
  meta.denoiser_width = tc.denoiser_width;
  meta.denoiser_depth = tc.denoiser_depth;
  meta.mode = tc.mode;
  meta.seed = tc.seed;

  std::vector<int> order(data_->train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  std::vector<MetricsRecord> records;
  double best_wer = std::numeric_limits<double>::infinity();

  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    auto t0 = std::chrono::steady_clock::now();
    for (int de : tc.decay_epochs)
      if (de == epoch) opt_.set_lr(opt_.lr() * tc.decay_factor);

    Rng shuffle = Rng::Stream(tc.seed, kRngShuffle, epoch);
    for (size_t i = order.size(); i > 1; --i) {
      uint64_t j = shuffle.UniformInt(0, i - 1);
      std::swap(order[i - 1], order[j]);
    }

    ResetMmdDiagnostic();
    LossBreakdown sums;
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(tc.batch_size)) {
      size_t stop = std::min(order.size(),
                             start + static_cast<size_t>(tc.batch_size));
      std::vector<int> batch(order.begin() + start, order.begin() + stop);
      LossBreakdown b = TrainStep(batch, epoch);
      sums.l_ctc += b.l_ctc;
      sums.l_eps += b.l_eps;
      sums.l_sc += b.l_sc;
      sums.total += b.total;
    }

    double n = static_cast<double>(order.size());
    MetricsRecord rec;
    rec.epoch = epoch;
    rec.mode = tc.mode;
    rec.l_ctc = sums.l_ctc / n;
    rec.l_eps = sums.l_eps / n;
    rec.l_sc = sums.l_sc / n;
    rec.total = sums.total / n;
    rec.dev_wer = Evaluate(data_->dev).wer;
    rec.mmd_v0hat_v = EpochMmdDiagnostic();
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    metrics << MetricsToJsonLine(rec) << "\n";
    metrics.flush();
    records.push_back(rec);

    meta.epoch = epoch;
    SaveCheckpoint((fs::path(out_dir) / "last.ckpt").string(), &model_,
                   &denoiser_, meta);
    if (rec.dev_wer < best_wer) {
      best_wer = rec.dev_wer;
      SaveCheckpoint((fs::path(out_dir) / "best.ckpt").string(), &model_,
                     &denoiser_, meta);
    }
  }
  return records;
}

Mat SampleV0Hat(const BaselineModel &model, const Denoiser &denoiser,
                const DiffusionSchedule &sched, const Codebook &cb,
                const TrainConfig &cfg, const Mat &frames,
                uint64_t stream_index) {
  auto outs = model.Forward(frames);
  const Mat &v = outs.v;
  Mat p_tc = TemporalCondition(FeatureSequence(outs.x_gwt)).data;
  Mat p_gc = GlossCondition(FeatureSequence(v), cb).data;
  Mat f = cfg.tau * p_tc + (1.0 - cfg.tau) * p_gc;

  Rng rng = Rng::Stream(cfg.seed, kRngDiffusion, stream_index);
  Mat eps = rng.NormalMat(v.rows(), v.cols());
  FeatureSequence noisy = ForwardNoise(FeatureSequence(v), FeatureSequence(f),
                                       cfg.t_noise, sched,
                                       FeatureSequence(eps));
  EpsFn fn = [&](const FeatureSequence &state, int t) {
    return FeatureSequence(
        denoiser.Forward(state.data, v, &f, t, Stream::kSequence));
  };
  return DenoiseLoop(noisy, FeatureSequence(f), fn, sched,
                     DdimSubsequence(cfg.t_noise, cfg.ddim_steps))
      .data;
}

namespace {

Mat CosineMatrix(const Mat &a, const Mat &b) {
  Mat out(a.rows(), b.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.rows(); ++j) {
      double na = std::max(a.row(i).norm(), 1e-12);
      double nb = std::max(b.row(j).norm(), 1e-12);
      out(i, j) = a.row(i).dot(b.row(j)) / (na * nb);
    }
  return out;
}

}  // namespace

SimilarityMatrices ComputeSimilarity(const BaselineModel &model,
                                     const Mat &frames) {
  auto outs = model.Forward(frames);
  SimilarityMatrices sim;
  sim.xgwt_self = CosineMatrix(outs.x_gwt, outs.x_gwt);
  sim.v_self = CosineMatrix(outs.v, outs.v);
  sim.cross = CosineMatrix(outs.v, outs.x_gwt);
  return sim;
}

}  // namespace cdr
