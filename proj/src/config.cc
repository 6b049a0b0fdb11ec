// src/config.cc

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

#include "cdr/config.h"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cdr {

namespace {

std::string Trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double ParseReal(const std::string &key, const std::string &v) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw std::invalid_argument("config: bad real for " + key + ": " + v);
  }
}

long ParseInt(const std::string &key, const std::string &v) {
  try {
    size_t pos = 0;
    long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  }
}

uint64_t ParseU64(const std::string &key, const std::string &v) {
  try {
    size_t pos = 0;
    uint64_t d = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  }
}

std::vector<int> ParseIntList(const std::string &key, const std::string &v) {
  std::vector<int> out;
  if (Trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(static_cast<int>(ParseInt(key, Trim(item))));
  return out;
}

std::string FormatReal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Config ParseConfig(const std::string &text) {
  Config cfg;
  TrainConfig &t = cfg.train;
  SyntheticDatasetSpec &d = cfg.data;

  using Setter = std::function<void(const std::string &, const std::string &)>;
  const std::map<std::string, Setter> setters = {
      {"train.mode", [&](auto &k, auto &v) { t.mode = v; (void)k; }},
      {"train.tau", [&](auto &k, auto &v) { t.tau = ParseReal(k, v); }},
      {"train.gamma1", [&](auto &k, auto &v) { t.gamma1 = ParseReal(k, v); }},
      {"train.gamma2", [&](auto &k, auto &v) { t.gamma2 = ParseReal(k, v); }},
      {"train.measure",
       [&](auto &k, auto &v) { t.measure = ParseMeasure(v); (void)k; }},
      {"train.lr", [&](auto &k, auto &v) { t.lr = ParseReal(k, v); }},
      {"train.weight_decay",
       [&](auto &k, auto &v) { t.weight_decay = ParseReal(k, v); }},
      {"train.batch_size",
       [&](auto &k, auto &v) { t.batch_size = (int)ParseInt(k, v); }},
      {"train.epochs",
       [&](auto &k, auto &v) { t.epochs = (int)ParseInt(k, v); }},
      {"train.decay_epochs",
       [&](auto &k, auto &v) { t.decay_epochs = ParseIntList(k, v); }},
      {"train.decay_factor",
       [&](auto &k, auto &v) { t.decay_factor = ParseReal(k, v); }},
      {"train.seed", [&](auto &k, auto &v) { t.seed = ParseU64(k, v); }},
      {"diffusion.t_noise",
       [&](auto &k, auto &v) { t.t_noise = (int)ParseInt(k, v); }},
      {"diffusion.ddim_steps",
       [&](auto &k, auto &v) { t.ddim_steps = (int)ParseInt(k, v); }},
      {"diffusion.beta_start",
       [&](auto &k, auto &v) { t.beta_start = ParseReal(k, v); }},
      {"diffusion.beta_end",
       [&](auto &k, auto &v) { t.beta_end = ParseReal(k, v); }},
      {"model.c_sp", [&](auto &k, auto &v) { t.c_sp = (int)ParseInt(k, v); }},
      {"model.c", [&](auto &k, auto &v) { t.c = (int)ParseInt(k, v); }},
      {"model.denoiser_width",
       [&](auto &k, auto &v) { t.denoiser_width = (int)ParseInt(k, v); }},
      {"model.denoiser_depth",
       [&](auto &k, auto &v) { t.denoiser_depth = (int)ParseInt(k, v); }},
      {"data.vocab", [&](auto &k, auto &v) { d.vocab = (int)ParseInt(k, v); }},
      {"data.c_in", [&](auto &k, auto &v) { d.c_in = (int)ParseInt(k, v); }},
      {"data.codebook_seed",
       [&](auto &k, auto &v) { d.codebook_seed = ParseU64(k, v); }},
      {"data.seed", [&](auto &k, auto &v) { d.seed = ParseU64(k, v); }},
      {"data.train_utterances",
       [&](auto &k, auto &v) { d.train_utterances = (int)ParseInt(k, v); }},
      {"data.dev_utterances",
       [&](auto &k, auto &v) { d.dev_utterances = (int)ParseInt(k, v); }},
      {"data.test_utterances",
       [&](auto &k, auto &v) { d.test_utterances = (int)ParseInt(k, v); }},
      {"data.l_min", [&](auto &k, auto &v) { d.l_min = (int)ParseInt(k, v); }},
      {"data.l_max", [&](auto &k, auto &v) { d.l_max = (int)ParseInt(k, v); }},
      {"data.d_min", [&](auto &k, auto &v) { d.d_min = (int)ParseInt(k, v); }},
      {"data.d_max", [&](auto &k, auto &v) { d.d_max = (int)ParseInt(k, v); }},
      {"data.noise_sigma",
       [&](auto &k, auto &v) { d.noise_sigma = ParseReal(k, v); }},
      {"data.smooth_width",
       [&](auto &k, auto &v) { d.smooth_width = (int)ParseInt(k, v); }},
  };

  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " has no '='");
    std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end())
      throw std::invalid_argument("config: unknown key " + key);
    it->second(key, value);
  }

  ValidateConfig(cfg);
  return cfg;
}

Config LoadConfig(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str());
}

std::string SerializeConfig(const Config &cfg) {
  const TrainConfig &t = cfg.train;
  const SyntheticDatasetSpec &d = cfg.data;
  std::ostringstream out;
  out << "train.mode = " << t.mode << "\n";
  out << "train.tau = " << FormatReal(t.tau) << "\n";
  out << "train.gamma1 = " << FormatReal(t.gamma1) << "\n";
  out << "train.gamma2 = " << FormatReal(t.gamma2) << "\n";
  out << "train.measure = " << MeasureName(t.measure) << "\n";
  out << "train.lr = " << FormatReal(t.lr) << "\n";
  out << "train.weight_decay = " << FormatReal(t.weight_decay) << "\n";
  out << "train.batch_size = " << t.batch_size << "\n";
  out << "train.epochs = " << t.epochs << "\n";
  out << "train.decay_epochs = ";
  for (size_t i = 0; i < t.decay_epochs.size(); ++i)
    out << (i ? "," : "") << t.decay_epochs[i];
  out << "\n";
  out << "train.decay_factor = " << FormatReal(t.decay_factor) << "\n";
  out << "train.seed = " << t.seed << "\n";
  out << "diffusion.t_noise = " << t.t_noise << "\n";
  out << "diffusion.ddim_steps = " << t.ddim_steps << "\n";
  out << "diffusion.beta_start = " << FormatReal(t.beta_start) << "\n";
  out << "diffusion.beta_end = " << FormatReal(t.beta_end) << "\n";
  out << "model.c_sp = " << t.c_sp << "\n";
  out << "model.c = " << t.c << "\n";
  out << "model.denoiser_width = " << t.denoiser_width << "\n";
  out << "model.denoiser_depth = " << t.denoiser_depth << "\n";
  out << "data.vocab = " << d.vocab << "\n";
  out << "data.c_in = " << d.c_in << "\n";
  out << "data.codebook_seed = " << d.codebook_seed << "\n";
  out << "data.seed = " << d.seed << "\n";
  out << "data.train_utterances = " << d.train_utterances << "\n";
  out << "data.dev_utterances = " << d.dev_utterances << "\n";
  out << "data.test_utterances = " << d.test_utterances << "\n";
  out << "data.l_min = " << d.l_min << "\n";
  out << "data.l_max = " << d.l_max << "\n";
  out << "data.d_min = " << d.d_min << "\n";
  out << "data.d_max = " << d.d_max << "\n";
  out << "data.noise_sigma = " << FormatReal(d.noise_sigma) << "\n";
  out << "data.smooth_width = " << d.smooth_width << "\n";
  return out.str();
}

void ValidateConfig(const Config &cfg) {
  const TrainConfig &t = cfg.train;
  const SyntheticDatasetSpec &d = cfg.data;
  auto fail = [](const std::string &msg) {
    throw std::invalid_argument("config: " + msg);
  };
  if (t.mode != "baseline" && t.mode != "cdr" && t.mode != "acdr")
    fail("train.mode must be baseline, cdr, or acdr (got " + t.mode + ")");
  if (t.tau < 0.0 || t.tau > 1.0) fail("train.tau must be in [0, 1]");
  if (t.gamma1 < 0.0) fail("train.gamma1 must be >= 0");
  if (t.gamma2 < 0.0) fail("train.gamma2 must be >= 0");
  if (t.lr <= 0.0) fail("train.lr must be positive");
  if (t.weight_decay < 0.0) fail("train.weight_decay must be >= 0");
  if (t.batch_size < 1) fail("train.batch_size must be >= 1");
  if (t.epochs < 1) fail("train.epochs must be >= 1");
  if (t.decay_factor <= 0.0 || t.decay_factor > 1.0)
    fail("train.decay_factor must be in (0, 1]");
  for (int e : t.decay_epochs)
    if (e < 1) fail("train.decay_epochs entries must be >= 1");
  if (t.t_noise < 1) fail("diffusion.t_noise must be >= 1");
  if (t.ddim_steps < 1 || t.ddim_steps > t.t_noise)
    fail("diffusion.ddim_steps must be in [1, t_noise]");
  if (t.beta_start <= 0.0 || t.beta_end >= 1.0 || t.beta_end < t.beta_start)
    fail("diffusion.beta_start/beta_end out of range");
  if (t.c_sp < 1 || t.c < 1) fail("model.c_sp and model.c must be >= 1");
  if (t.denoiser_width < 1 || t.denoiser_depth < 0)
    fail("model.denoiser_width/denoiser_depth out of range");
  if (d.vocab < 1) fail("data.vocab must be >= 1");
  if (d.c_in < 1) fail("data.c_in must be >= 1");
  if (d.train_utterances < 1 || d.dev_utterances < 1 || d.test_utterances < 1)
    fail("data.*_utterances must be >= 1");
  if (d.l_min < 1 || d.l_max < d.l_min)
    fail("data.l_min/l_max: need 1 <= l_min <= l_max");
  if (d.d_min < 1 || d.d_max < d.d_min)
    fail("data.d_min/d_max: need 1 <= d_min <= d_max");
  if (d.noise_sigma < 0.0) fail("data.noise_sigma must be >= 0");
  if (d.smooth_width < 1) fail("data.smooth_width must be >= 1");
}

}  // namespace cdr
