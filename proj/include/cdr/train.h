// cdr/train.h

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

#ifndef CDR_TRAIN_H_
#define CDR_TRAIN_H_

#include <string>
#include <vector>

#include "cdr/checkpoint.h"
#include "cdr/dataset.h"
#include "cdr/denoiser.h"
#include "cdr/diffusion.h"
#include "cdr/model.h"
#include "cdr/optimizer.h"
#include "cdr/wer.h"

namespace cdr {

struct MetricsRecord {
  int epoch = 0;
  std::string mode;
  double l_ctc = 0.0;
  double l_eps = 0.0;
  double l_sc = 0.0;
  double total = 0.0;
  double dev_wer = 0.0;
  double mmd_v0hat_v = 0.0;  // diagnostic; 0 in baseline mode
  double wall_seconds = 0.0;
};

std::string MetricsToJsonLine(const MetricsRecord &rec);

// Training driver for the three modes:
//   baseline - CTC on the classifier logits of V.
//   cdr      - the classifier consumes the denoised V0_hat; CTC plus the
//              gamma1-weighted noise loss.
//   acdr     - CTC on V plus gamma1 * noise loss + gamma2 * semantic
//              constraint through the full denoise loop.
// Every gradient is exact reverse-mode, including backprop through the
// unrolled strided denoise loop. Noise draws come from per-utterance RNG
// streams independent of shuffling, so disabling the regularizers
// (gamma1 = gamma2 = 0) reproduces baseline updates bit for bit.
class Trainer {
 public:
  Trainer(const Config &cfg, const Dataset *data);

  // One optimizer step over the listed train-split utterances. Gradients are
  // averaged over the batch; the returned components are per-batch sums.
  // Infeasible CTC targets are skipped with a warning on stderr.
  LossBreakdown TrainStep(const std::vector<int> &batch, int epoch);

  // Full training run; writes metrics.jsonl, last.ckpt and best.ckpt (by dev
  // WER) under out_dir. Returns the per-epoch records.
  std::vector<MetricsRecord> Run(const std::string &out_dir);

  // Greedy decoding on V for every utterance; corpus-level counts.
  WerReport Evaluate(const std::vector<Utterance> &split) const;

  // Test hook: bypass the denoiser and use the true drawn noise, which makes
  // the recovered V0_hat equal V exactly (single-step algebraic inverse).
  void set_use_oracle_eps(bool v) { use_oracle_eps_ = v; }

  // Diagnostic MMD(V0_hat, V) averaged over the most recent epoch's steps.
  double EpochMmdDiagnostic() const;
  void ResetMmdDiagnostic();

  BaselineModel &model() { return model_; }
  Denoiser &denoiser() { return denoiser_; }
  Adam &optimizer() { return opt_; }
  const DiffusionSchedule &schedule() const { return sched_; }

 private:
  void StepUtterance(const Utterance &utt, uint64_t stream_index,
                     double scale, LossBreakdown *acc, int *used);

  Config cfg_;
  const Dataset *data_;
  DiffusionSchedule sched_;
  BaselineModel model_;
  Denoiser denoiser_;
  Adam opt_;
  bool use_oracle_eps_ = false;
  double mmd_sum_ = 0.0;
  long mmd_count_ = 0;
};

// Standalone denoise pass for one utterance: build V and the condition,
// noise to t_noise with the indexed diffusion stream, run the deterministic
// strided loop, return V0_hat.
Mat SampleV0Hat(const BaselineModel &model, const Denoiser &denoiser,
                const DiffusionSchedule &sched, const Codebook &cb,
                const TrainConfig &cfg, const Mat &frames,
                uint64_t stream_index);

struct SimilarityMatrices {
  Mat xgwt_self;  // cosine self-similarity of X_gwt, T x T
  Mat v_self;     // cosine self-similarity of V, T x T
  Mat cross;      // cosine similarity of V rows vs X_gwt rows, T x T
};

SimilarityMatrices ComputeSimilarity(const BaselineModel &model,
                                     const Mat &frames);

}  // namespace cdr

#endif  // CDR_TRAIN_H_
