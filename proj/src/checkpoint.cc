// src/checkpoint.cc

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

#include "cdr/checkpoint.h"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace cdr {

namespace {

using nlohmann::json;

json MetaToJson(const CheckpointMeta &m) {
  json j;
  j["c_in"] = m.dims.c_in;
  j["c_sp"] = m.dims.c_sp;
  j["c"] = m.dims.c;
  j["vocab"] = m.dims.vocab;
  j["denoiser_width"] = m.denoiser_width;
  j["denoiser_depth"] = m.denoiser_depth;
  j["mode"] = m.mode;
  j["seed"] = m.seed;
  j["epoch"] = m.epoch;
  return j;
}

CheckpointMeta MetaFromJson(const json &j) {
  CheckpointMeta m;
  m.dims.c_in = j.at("c_in").get<int>();
  m.dims.c_sp = j.at("c_sp").get<int>();
  m.dims.c = j.at("c").get<int>();
  m.dims.vocab = j.at("vocab").get<int>();
  m.denoiser_width = j.at("denoiser_width").get<int>();
  m.denoiser_depth = j.at("denoiser_depth").get<int>();
  m.mode = j.at("mode").get<std::string>();
  m.seed = j.at("seed").get<uint64_t>();
  m.epoch = j.at("epoch").get<int>();
  return m;
}

}  // namespace

void SaveCheckpoint(const std::string &path, BaselineModel *model,
                    Denoiser *denoiser, const CheckpointMeta &meta) {
  nn::ParamRefs params = model->Params();
  nn::ParamRefs dn = denoiser->Params();
  params.insert(params.end(), dn.begin(), dn.end());

  json header;
  header["format_version"] = 1;
  header["meta"] = MetaToJson(meta);
  header["params"] = json::array();
  for (const auto *p : params)
    header["params"].push_back(
        {{"name", p->name}, {"rows", p->value.rows()}, {"cols", p->value.cols()}});

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  out << header.dump() << "\n";
  for (const auto *p : params)
    for (int i = 0; i < p->value.rows(); ++i)
      for (int j = 0; j < p->value.cols(); ++j) {
        float v = static_cast<float>(p->value(i, j));
        char buf[4];
        std::memcpy(buf, &v, 4);
        out.write(buf, 4);
      }
}

LoadedCheckpoint LoadCheckpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot read " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("checkpoint: missing header in " + path);
  json header = json::parse(line);
  if (header.at("format_version").get<int>() != 1)
    throw std::runtime_error("checkpoint: unsupported format version");

  LoadedCheckpoint ck;
  ck.meta = MetaFromJson(header.at("meta"));
  ck.model = BaselineModel::Init(ck.meta.seed, ck.meta.dims);
  ck.denoiser = Denoiser::Init(ck.meta.seed, ck.meta.dims.c,
                               ck.meta.denoiser_width, ck.meta.denoiser_depth);

  nn::ParamRefs params = ck.model.Params();
  nn::ParamRefs dn = ck.denoiser.Params();
  params.insert(params.end(), dn.begin(), dn.end());

  const json &table = header.at("params");
  if (table.size() != params.size())
    throw std::runtime_error("checkpoint: parameter table size mismatch");
  for (size_t k = 0; k < params.size(); ++k) {
    nn::Tensor *p = params[k];
    const json &rec = table[k];
    if (rec.at("name").get<std::string>() != p->name ||
        rec.at("rows").get<long>() != p->value.rows() ||
        rec.at("cols").get<long>() != p->value.cols())
      throw std::runtime_error("checkpoint: parameter mismatch at " + p->name);
    for (int i = 0; i < p->value.rows(); ++i)
      for (int j = 0; j < p->value.cols(); ++j) {
        char buf[4];
        if (!in.read(buf, 4))
          throw std::runtime_error("checkpoint: truncated payload");
        float v;
        std::memcpy(&v, buf, 4);
        p->value(i, j) = static_cast<double>(v);
      }
  }
  return ck;
}

}  // namespace cdr
