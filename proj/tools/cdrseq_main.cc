// tools/cdrseq_main.cc

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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cdr/checkpoint.h"
#include "cdr/config.h"
#include "cdr/dataset.h"
#include "cdr/train.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using cdr::Config;
using cdr::Mat;

struct Args {
  std::string config_path, data_dir, out_path, ckpt_path;
  std::string mode, split = "dev";
  int utt = 0;
  long long seed = -1;  // -1: keep the config value
};

Config LoadOrDefault(const Args &a) {
  Config cfg = a.config_path.empty() ? Config{} : cdr::LoadConfig(a.config_path);
  if (a.seed >= 0) {
    cfg.train.seed = static_cast<uint64_t>(a.seed);
    cfg.data.seed = static_cast<uint64_t>(a.seed);
  }
  if (!a.mode.empty()) cfg.train.mode = a.mode;
  cdr::ValidateConfig(cfg);
  return cfg;
}

std::string ResolveCkpt(const std::string &path) {
  if (fs::exists(path)) return path;
  if (fs::exists(path + ".ckpt")) return path + ".ckpt";
  throw std::invalid_argument("checkpoint not found: " + path);
}

void WriteCsv(const fs::path &path, const Mat &m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  char buf[64];
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
}

const cdr::Utterance &PickUtterance(const cdr::Dataset &ds,
                                    const std::string &split, int utt) {
  const auto &s = ds.Split(split);
  if (utt < 0 || utt >= static_cast<int>(s.size()))
    throw std::invalid_argument("utterance index out of range for split " +
                                split);
  return s[utt];
}

int RunGenData(const Args &a) {
  Config cfg = LoadOrDefault(a);
  cdr::Dataset ds = cdr::GenerateDataset(cfg.data);
  cdr::SaveDataset(ds, a.out_path);
  std::cout << "wrote dataset to " << a.out_path << "\n";
  return 0;
}

int RunTrain(const Args &a) {
  Config cfg = LoadOrDefault(a);
  cdr::Dataset ds = cdr::LoadDataset(a.data_dir);
  cdr::Trainer trainer(cfg, &ds);
  auto records = trainer.Run(a.out_path);
  if (!records.empty())
    std::cout << "final dev WER " << records.back().dev_wer << " after "
              << records.size() << " epochs\n";
  return 0;
}

int RunEval(const Args &a) {
  cdr::LoadedCheckpoint ck = cdr::LoadCheckpoint(ResolveCkpt(a.ckpt_path));
  cdr::Dataset ds = cdr::LoadDataset(a.data_dir);
  const auto &split = ds.Split(a.split);
  if (split.empty()) throw std::runtime_error("empty split " + a.split);

  cdr::WerReport agg;
  for (const auto &utt : split) {
    auto outs = ck.model.Forward(utt.frames);
    cdr::WerReport r = cdr::ComputeWer(cdr::CtcGreedyDecode(outs.z), utt.labels);
    agg.sub += r.sub;
    agg.del += r.del;
    agg.ins += r.ins;
    agg.ref_len += r.ref_len;
  }
  agg.wer = static_cast<double>(agg.sub + agg.del + agg.ins) / agg.ref_len;

  nlohmann::json j;
  j["split"] = a.split;
  j["wer"] = agg.wer;
  j["sub"] = agg.sub;
  j["del"] = agg.del;
  j["ins"] = agg.ins;
  j["ref_len"] = agg.ref_len;
  std::cout << j.dump() << "\n";
  return 0;
}

int RunSample(const Args &a) {
  Config cfg = LoadOrDefault(a);
  cdr::LoadedCheckpoint ck = cdr::LoadCheckpoint(ResolveCkpt(a.ckpt_path));
  cdr::Dataset ds = cdr::LoadDataset(a.data_dir);
  const auto &utt = PickUtterance(ds, a.split, a.utt);
  cdr::DiffusionSchedule sched = cdr::MakeLinearSchedule(
      cfg.train.beta_start, cfg.train.beta_end, cfg.train.t_noise);
  Mat v0_hat =
      cdr::SampleV0Hat(ck.model, ck.denoiser, sched, ds.codebook, cfg.train,
                       utt.frames, static_cast<uint64_t>(a.utt));
  WriteCsv(a.out_path, v0_hat);
  std::cout << "wrote " << a.out_path << "\n";
  return 0;
}

int RunExportSim(const Args &a) {
  cdr::LoadedCheckpoint ck = cdr::LoadCheckpoint(ResolveCkpt(a.ckpt_path));
  cdr::Dataset ds = cdr::LoadDataset(a.data_dir);
  const auto &utt = PickUtterance(ds, a.split, a.utt);
  cdr::SimilarityMatrices sim = cdr::ComputeSimilarity(ck.model, utt.frames);
  fs::create_directories(a.out_path);
  WriteCsv(fs::path(a.out_path) / "xgwt_self.csv", sim.xgwt_self);
  WriteCsv(fs::path(a.out_path) / "v_self.csv", sim.v_self);
  WriteCsv(fs::path(a.out_path) / "v_xgwt_cross.csv", sim.cross);
  std::cout << "wrote similarity matrices to " << a.out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Conditional-diffusion feature refinement for gloss sequences"};
  app.require_subcommand(1);
  Args args;

  auto add_common = [&](CLI::App *sub, bool need_data, bool need_ckpt) {
    sub->add_option("--config", args.config_path, "key=value config file");
    sub->add_option("--seed", args.seed, "override the config seeds");
    if (need_data)
      sub->add_option("--data", args.data_dir, "dataset directory")
          ->required();
    if (need_ckpt)
      sub->add_option("--ckpt", args.ckpt_path, "checkpoint path")->required();
  };

  CLI::App *gen = app.add_subcommand("gen-data", "generate a synthetic corpus");
  add_common(gen, false, false);
  gen->add_option("--out", args.out_path, "output directory")->required();

  CLI::App *train = app.add_subcommand("train", "train a model");
  add_common(train, true, false);
  train->add_option("--mode", args.mode, "baseline | cdr | acdr")
      ->check(CLI::IsMember({"baseline", "cdr", "acdr"}));
  train->add_option("--out", args.out_path, "run directory")->required();

  CLI::App *eval = app.add_subcommand("eval", "evaluate a checkpoint");
  add_common(eval, true, true);
  eval->add_option("--split", args.split, "train | dev | test");

  CLI::App *sample =
      app.add_subcommand("sample", "denoise one utterance's V and save V0_hat");
  add_common(sample, true, true);
  sample->add_option("--split", args.split, "train | dev | test");
  sample->add_option("--utt", args.utt, "utterance index");
  sample->add_option("--out", args.out_path, "output CSV path")->required();

  CLI::App *sim =
      app.add_subcommand("export-sim", "export cosine similarity matrices");
  add_common(sim, true, true);
  sim->add_option("--split", args.split, "train | dev | test");
  sim->add_option("--utt", args.utt, "utterance index");
  sim->add_option("--out", args.out_path, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (gen->parsed()) return RunGenData(args);
    if (train->parsed()) return RunTrain(args);
    if (eval->parsed()) return RunEval(args);
    if (sample->parsed()) return RunSample(args);
    if (sim->parsed()) return RunExportSim(args);
    std::cerr << app.help();
    return 1;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
