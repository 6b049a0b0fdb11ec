// src/dataset.cc

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

#include "cdr/dataset.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "cdr/rng.h"
#include "json.hpp"

namespace cdr {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char *kSplitNames[3] = {"train", "dev", "test"};
// Stream index block per split so utterance streams never collide.
constexpr uint64_t kSplitStride = 1000000;

Mat SmoothFrames(const Mat &frames, int width) {
  if (width <= 1) return frames;
  Mat out = Mat::Zero(frames.rows(), frames.cols());
  int half = width / 2;
  for (int i = 0; i < frames.rows(); ++i) {
    int lo = std::max(0, i - half);
    int hi = std::min<int>(frames.rows() - 1, i + half);
    for (int j = lo; j <= hi; ++j) out.row(i) += frames.row(j);
    out.row(i) /= (hi - lo + 1);
  }
  return out;
}

Mat QuantizeF32(const Mat &m) {
  Mat out = m;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      out(i, j) = static_cast<double>(static_cast<float>(m(i, j)));
  return out;
}

Utterance MakeUtterance(const SyntheticDatasetSpec &spec, const Codebook &cb,
                        Rng *rng) {
  Utterance u;
  int l = static_cast<int>(rng->UniformInt(spec.l_min, spec.l_max));
  u.labels.resize(l);
  for (int j = 0; j < l; ++j)
    u.labels[j] = static_cast<int>(rng->UniformInt(1, spec.vocab));
  std::vector<int> dur(l);
  int total = 0;
  for (int j = 0; j < l; ++j) {
    dur[j] = static_cast<int>(rng->UniformInt(spec.d_min, spec.d_max));
    total += dur[j];
  }
  // Constructive CTC feasibility: pad durations until the alignment bound
  // holds (only reachable when d_min == 1 and the sequence repeats).
  for (int j = 0; total < CtcMinFrames(u.labels); j = (j + 1) % l) {
    ++dur[j];
    ++total;
  }
  u.frames = Mat::Zero(total, spec.c_in);
  int row = 0;
  for (int j = 0; j < l; ++j)
    for (int r = 0; r < dur[j]; ++r) {
      u.frames.row(row) = cb.entries.row(u.labels[j] - 1);
      if (spec.noise_sigma > 0.0)
        for (int c = 0; c < spec.c_in; ++c)
          u.frames(row, c) += spec.noise_sigma * rng->Normal();
      ++row;
    }
  u.frames = QuantizeF32(SmoothFrames(u.frames, spec.smooth_width));
  return u;
}

std::string FramesBytes(const std::vector<Utterance> &split) {
  std::string out;
  for (const auto &u : split)
    for (int i = 0; i < u.frames.rows(); ++i)
      for (int j = 0; j < u.frames.cols(); ++j) {
        float v = static_cast<float>(u.frames(i, j));
        char buf[4];
        std::memcpy(buf, &v, 4);
        out.append(buf, 4);
      }
  return out;
}

std::string IndexBytes(const std::vector<Utterance> &split) {
  json idx;
  idx["utterances"] = json::array();
  long offset = 0;
  for (const auto &u : split) {
    json rec;
    rec["offset_rows"] = offset;
    rec["t"] = u.frames.rows();
    rec["labels"] = u.labels;
    idx["utterances"].push_back(rec);
    offset += u.frames.rows();
  }
  return idx.dump(2) + "\n";
}

std::string CodebookBytes(const Codebook &cb) {
  std::string out;
  for (int i = 0; i < cb.entries.rows(); ++i)
    for (int j = 0; j < cb.entries.cols(); ++j) {
      double v = cb.entries(i, j);
      char buf[8];
      std::memcpy(buf, &v, 8);
      out.append(buf, 8);
    }
  return out;
}

std::string HexChecksum(const std::string &bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a(bytes)));
  return buf;
}

void WriteFile(const fs::path &path, const std::string &bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("dataset: cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("dataset: cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return bytes;
}

json SpecToJson(const SyntheticDatasetSpec &s) {
  json j;
  j["vocab"] = s.vocab;
  j["c_in"] = s.c_in;
  j["codebook_seed"] = s.codebook_seed;
  j["seed"] = s.seed;
  j["train_utterances"] = s.train_utterances;
  j["dev_utterances"] = s.dev_utterances;
  j["test_utterances"] = s.test_utterances;
  j["l_min"] = s.l_min;
  j["l_max"] = s.l_max;
  j["d_min"] = s.d_min;
  j["d_max"] = s.d_max;
  j["noise_sigma"] = s.noise_sigma;
  j["smooth_width"] = s.smooth_width;
  return j;
}

SyntheticDatasetSpec SpecFromJson(const json &j) {
  SyntheticDatasetSpec s;
  s.vocab = j.at("vocab").get<int>();
  s.c_in = j.at("c_in").get<int>();
  s.codebook_seed = j.at("codebook_seed").get<uint64_t>();
  s.seed = j.at("seed").get<uint64_t>();
  s.train_utterances = j.at("train_utterances").get<int>();
  s.dev_utterances = j.at("dev_utterances").get<int>();
  s.test_utterances = j.at("test_utterances").get<int>();
  s.l_min = j.at("l_min").get<int>();
  s.l_max = j.at("l_max").get<int>();
  s.d_min = j.at("d_min").get<int>();
  s.d_max = j.at("d_max").get<int>();
  s.noise_sigma = j.at("noise_sigma").get<double>();
  s.smooth_width = j.at("smooth_width").get<int>();
  return s;
}

}  // namespace

uint64_t Fnv1a(const std::string &bytes) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

const std::vector<Utterance> &Dataset::Split(const std::string &name) const {
  if (name == "train") return train;
  if (name == "dev") return dev;
  if (name == "test") return test;
  throw std::invalid_argument("dataset: unknown split " + name);
}

Dataset GenerateDataset(const SyntheticDatasetSpec &spec) {
  Config probe;
  probe.data = spec;
  ValidateConfig(probe);

  Dataset ds;
  ds.spec = spec;
  ds.codebook = BuildCodebook(spec.codebook_seed, spec.vocab, spec.c_in);

  const int counts[3] = {spec.train_utterances, spec.dev_utterances,
                         spec.test_utterances};
  std::vector<Utterance> *splits[3] = {&ds.train, &ds.dev, &ds.test};
  for (int s = 0; s < 3; ++s) {
    splits[s]->reserve(counts[s]);
    for (int i = 0; i < counts[s]; ++i) {
      Rng rng = Rng::Stream(spec.seed, kRngData,
                            (s + 1) * kSplitStride + static_cast<uint64_t>(i));
      splits[s]->push_back(MakeUtterance(spec, ds.codebook, &rng));
    }
  }
  return ds;
}

void SaveDataset(const Dataset &ds, const std::string &dir) {
  fs::create_directories(dir);
  json manifest;
  manifest["format_version"] = 1;
  manifest["spec"] = SpecToJson(ds.spec);

  std::string cb_bytes = CodebookBytes(ds.codebook);
  WriteFile(fs::path(dir) / "codebook.bin", cb_bytes);
  manifest["codebook"] = {{"file", "codebook.bin"},
                          {"rows", ds.codebook.entries.rows()},
                          {"cols", ds.codebook.entries.cols()},
                          {"checksum", HexChecksum(cb_bytes)}};

  const std::vector<Utterance> *splits[3] = {&ds.train, &ds.dev, &ds.test};
  for (int s = 0; s < 3; ++s) {
    fs::path sd = fs::path(dir) / kSplitNames[s];
    fs::create_directories(sd);
    std::string frames = FramesBytes(*splits[s]);
    std::string index = IndexBytes(*splits[s]);
    WriteFile(sd / "frames.bin", frames);
    WriteFile(sd / "index.json", index);
    manifest["splits"][kSplitNames[s]] = {
        {"frames_checksum", HexChecksum(frames)},
        {"index_checksum", HexChecksum(index)}};
  }
  WriteFile(fs::path(dir) / "manifest.json", manifest.dump(2) + "\n");
}

Dataset LoadDataset(const std::string &dir) {
  json manifest = json::parse(ReadFile(fs::path(dir) / "manifest.json"));
  Dataset ds;
  ds.spec = SpecFromJson(manifest.at("spec"));

  const json &cbj = manifest.at("codebook");
  std::string cb_bytes =
      ReadFile(fs::path(dir) / cbj.at("file").get<std::string>());
  if (HexChecksum(cb_bytes) != cbj.at("checksum").get<std::string>())
    throw std::runtime_error("dataset: codebook checksum mismatch");
  int rows = cbj.at("rows").get<int>(), cols = cbj.at("cols").get<int>();
  if (static_cast<size_t>(rows) * cols * 8 != cb_bytes.size())
    throw std::runtime_error("dataset: codebook size mismatch");
  ds.codebook.entries = Mat::Zero(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      double v;
      std::memcpy(&v, cb_bytes.data() + 8 * (i * cols + j), 8);
      ds.codebook.entries(i, j) = v;
    }

  std::vector<Utterance> *splits[3] = {&ds.train, &ds.dev, &ds.test};
  for (int s = 0; s < 3; ++s) {
    fs::path sd = fs::path(dir) / kSplitNames[s];
    std::string frames = ReadFile(sd / "frames.bin");
    std::string index = ReadFile(sd / "index.json");
    const json &mj = manifest.at("splits").at(kSplitNames[s]);
    if (HexChecksum(frames) != mj.at("frames_checksum").get<std::string>() ||
        HexChecksum(index) != mj.at("index_checksum").get<std::string>())
      throw std::runtime_error(std::string("dataset: checksum mismatch in ") +
                               kSplitNames[s]);
    json idx = json::parse(index);
    int c = ds.spec.c_in;
    for (const json &rec : idx.at("utterances")) {
      Utterance u;
      long offset = rec.at("offset_rows").get<long>();
      long t = rec.at("t").get<long>();
      u.labels = rec.at("labels").get<GlossSequence>();
      if (static_cast<size_t>((offset + t)) * c * 4 > frames.size())
        throw std::runtime_error("dataset: index overruns frames.bin");
      u.frames = Mat::Zero(t, c);
      for (long i = 0; i < t; ++i)
        for (int j = 0; j < c; ++j) {
          float v;
          std::memcpy(&v, frames.data() + 4 * ((offset + i) * c + j), 4);
          u.frames(i, j) = static_cast<double>(v);
        }
      splits[s]->push_back(std::move(u));
    }
  }
  return ds;
}

}  // namespace cdr
