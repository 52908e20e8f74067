/*
 * Copyright 2026 The UCC Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <ucc/dataset.h>
#include <ucc/pipeline.h>
#include <ucc/synthetic.h>

namespace ucc {

/// Per-dataset hyper-parameters: learning rate, L2 weight, consistency
/// weight, embedding size, pseudo-label cap K and momentum gamma.
struct Preset {
  std::string name;
  double lr = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  std::size_t dim = 0;
  std::size_t k_cap = 0;
  double gamma = 0.0;
};

/// yelp, amazon-book, movielens-1m.
const std::vector<Preset>& builtin_presets();
const Preset& find_preset(const std::string& name);

enum class DataSource { kSynthetic, kRaw, kSplit };

struct DataConfig {
  DataSource source = DataSource::kSynthetic;
  std::filesystem::path path;  // raw interaction file or split directory
  Format format = Format::kTsv;
  std::size_t kcore = 10;
  std::uint64_t split_seed = 0;
  SyntheticConfig synthetic;
};

struct RunConfig {
  std::string preset;
  std::uint64_t seed = 2024;
  std::filesystem::path out = "ucc_out";
  DataConfig data;
  PipelineConfig pipeline;
};

/// Overrides applied after the file is read, in CLI flag order of
/// precedence.
struct ConfigOverrides {
  std::optional<std::string> preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::filesystem::path> out;
  bool teacher_only = false;
};

/// Flat key = value text with [sections]. Precedence, lowest first:
/// built-in defaults, preset, the master seed (which seeds every phase and
/// the data), explicit keys, then `overrides`. [artifacts] and [metrics]
/// sections are ignored so a run manifest can be fed back in. Unknown keys
/// and bad values raise ConfigParseError.
RunConfig parse_config(std::istream& in, const ConfigOverrides& overrides = {});
RunConfig load_config(const std::filesystem::path& path,
                      const ConfigOverrides& overrides = {});
RunConfig default_config(const ConfigOverrides& overrides = {});

/// Fully resolved config text; parse_config(to_config_text(c)) == c.
std::string to_config_text(const RunConfig& config);

/// Synthetic generation, raw load + k-core + split, or a saved split.
SplitSet load_data(const DataConfig& config);

}  // namespace ucc
