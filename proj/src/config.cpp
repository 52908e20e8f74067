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


#include <ucc/config.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <ucc/error.h>

namespace ucc {

const std::vector<Preset>& builtin_presets() {
  static const std::vector<Preset> presets = {
      {"yelp", 1e-4, 1e-4, 0.1, 64, 5, 0.3},
      {"amazon-book", 1e-4, 1e-4, 0.5, 64, 20, 0.3},
      {"movielens-1m", 1e-4, 1e-3, 0.02, 64, 5, 0.9},
  };
  return presets;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : builtin_presets()) {
    if (p.name == name) return p;
  }
  fail(ErrorCode::kConfigParseError, "unknown preset '" + name + "'");
}

namespace {

using boost::property_tree::ptree;

[[noreturn]] void bad(const std::string& key, const std::string& value,
                      const char* expected) {
  fail(ErrorCode::kConfigParseError,
       "key '" + key + "': expected " + expected + ", got '" + value + "'");
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    bad(key, v, "a number");
  }
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    bad(key, v, "a non-negative integer");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad(key, v, "true or false");
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

const char* to_text(NegativeMode m) {
  return m == NegativeMode::kInBatch ? "batch" : "full";
}

const char* to_text(DataSource s) {
  switch (s) {
    case DataSource::kRaw:
      return "raw";
    case DataSource::kSplit:
      return "split";
    case DataSource::kSynthetic:
      break;
  }
  return "synthetic";
}

// Returns false when the key is not a training key.
bool set_train_key(TrainConfig& c, const std::string& name,
                   const std::string& full, const std::string& v) {
  if (name == "lr") c.lr = to_double(full, v);
  else if (name == "lambda") c.lambda = to_double(full, v);
  else if (name == "mu") c.mu = to_double(full, v);
  else if (name == "tau") c.tau = to_double(full, v);
  else if (name == "rho") c.rho = to_double(full, v);
  else if (name == "dim") c.dim = to_u64(full, v);
  else if (name == "layers") c.layers = to_u64(full, v);
  else if (name == "batch_size") c.batch_size = to_u64(full, v);
  else if (name == "max_epochs") c.max_epochs = to_u64(full, v);
  else if (name == "patience") c.patience = to_u64(full, v);
  else if (name == "init_scale") c.init_scale = to_double(full, v);
  else if (name == "eval_k") c.eval_k = to_u64(full, v);
  else if (name == "negatives") {
    if (v == "full") c.negatives = NegativeMode::kFull;
    else if (v == "batch") c.negatives = NegativeMode::kInBatch;
    else bad(full, v, "full or batch");
  } else {
    return false;
  }
  return true;
}

void apply_preset(RunConfig& c, const Preset& p) {
  c.preset = p.name;
  for (TrainConfig* t : {&c.pipeline.teacher, &c.pipeline.student}) {
    t->lr = p.lr;
    t->lambda = p.lambda;
    t->mu = p.mu;
    t->dim = p.dim;
  }
  c.pipeline.k_cap = p.k_cap;
  c.pipeline.gamma = p.gamma;
}

void apply_seed(RunConfig& c, std::uint64_t seed) {
  c.seed = seed;
  c.pipeline.teacher.seed = derive_seed(seed, 100, 0);
  c.pipeline.student.seed = derive_seed(seed, 101, 0);
}

void apply_top(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "preset" || key == "seed") {
    // handled before explicit keys
  } else if (key == "threads") {
    c.pipeline.threads = to_u64(key, v);
  } else if (key == "out") {
    c.out = v;
  } else if (key == "teacher_only") {
    c.pipeline.teacher_only = to_bool(key, v);
  } else {
    fail(ErrorCode::kConfigParseError, "unknown key '" + key + "'");
  }
}

void apply_data(DataConfig& d, const std::string& name, const std::string& v) {
  const std::string full = "data." + name;
  auto& s = d.synthetic;
  if (name == "source") {
    if (v == "synthetic") d.source = DataSource::kSynthetic;
    else if (v == "raw") d.source = DataSource::kRaw;
    else if (v == "split") d.source = DataSource::kSplit;
    else bad(full, v, "synthetic, raw or split");
  } else if (name == "path") {
    d.path = v;
  } else if (name == "format") {
    if (v != "tsv" && v != "csv") bad(full, v, "tsv or csv");
    d.format = parse_format(v);
  } else if (name == "kcore") {
    d.kcore = to_u64(full, v);
  } else if (name == "split_seed") {
    d.split_seed = to_u64(full, v);
  } else if (name == "users") {
    s.num_users = to_u64(full, v);
  } else if (name == "items") {
    s.num_items = to_u64(full, v);
  } else if (name == "rank") {
    s.rank = to_u64(full, v);
  } else if (name == "zipf") {
    s.zipf_exponent = to_double(full, v);
  } else if (name == "sharpness") {
    s.sharpness = to_double(full, v);
  } else if (name == "min_per_user") {
    s.min_per_user = to_u64(full, v);
  } else if (name == "mean_extra_per_user") {
    s.mean_extra_per_user = to_u64(full, v);
  } else if (name == "synthetic_seed") {
    s.seed = to_u64(full, v);
  } else {
    fail(ErrorCode::kConfigParseError, "unknown key '" + full + "'");
  }
}

void apply_ucc(PipelineConfig& p, const std::string& name, const std::string& v) {
  const std::string full = "ucc." + name;
  if (name == "gamma") p.gamma = to_double(full, v);
  else if (name == "alpha") p.alpha = to_double(full, v);
  else if (name == "k_cap") p.k_cap = to_u64(full, v);
  else if (name == "momentum") {
    if (v == "epoch") p.momentum = MomentumSchedule::kPerEpoch;
    else if (v == "batch") p.momentum = MomentumSchedule::kPerBatch;
    else bad(full, v, "epoch or batch");
  } else if (name == "confidence") {
    if (v == "absolute") p.confidence = Confidence::kAbsolute;
    else if (v == "signed") p.confidence = Confidence::kSigned;
    else bad(full, v, "absolute or signed");
  } else if (name == "warm_start") p.warm_start = to_bool(full, v);
  else if (name == "pseudo_positives") p.pseudo_positives = to_bool(full, v);
  else fail(ErrorCode::kConfigParseError, "unknown key '" + full + "'");
}

void finish(RunConfig& c, const ConfigOverrides& o) {
  if (o.seed) apply_seed(c, *o.seed);
  if (o.threads) c.pipeline.threads = *o.threads;
  if (o.out) c.out = *o.out;
  if (o.teacher_only) c.pipeline.teacher_only = true;
  try {
    validate(c.pipeline);
  } catch (const Error& e) {
    fail(ErrorCode::kConfigParseError, e.what());
  }
}

}  // namespace

RunConfig default_config(const ConfigOverrides& overrides) {
  RunConfig c;
  apply_seed(c, c.seed);
  if (overrides.preset) apply_preset(c, find_preset(*overrides.preset));
  finish(c, overrides);
  return c;
}

RunConfig parse_config(std::istream& in, const ConfigOverrides& overrides) {
  ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorCode::kConfigParseError, e.what());
  }

  RunConfig c;
  std::string preset = overrides.preset.value_or(tree.get("preset", ""));
  if (!preset.empty()) apply_preset(c, find_preset(preset));
  apply_seed(c, tree.get_optional<std::string>("seed")
                    ? to_u64("seed", tree.get<std::string>("seed"))
                    : c.seed);

  // Shared [train] keys first, so [teacher]/[student] can refine them.
  if (auto train = tree.get_child_optional("train")) {
    for (const auto& [name, node] : *train) {
      const std::string v = node.get_value<std::string>();
      if (!set_train_key(c.pipeline.teacher, name, "train." + name, v) ||
          !set_train_key(c.pipeline.student, name, "train." + name, v)) {
        fail(ErrorCode::kConfigParseError, "unknown key 'train." + name + "'");
      }
    }
  }

  for (const auto& [key, node] : tree) {
    const bool is_section = key == "data" || key == "ucc" || key == "train" ||
                            key == "teacher" || key == "student" ||
                            key == "artifacts" || key == "metrics";
    if (node.empty() && !(is_section && node.data().empty())) {
      apply_top(c, key, node.get_value<std::string>());
      continue;
    }
    if (key == "train" || key == "artifacts" || key == "metrics") continue;
    for (const auto& [name, child] : node) {
      const std::string v = child.get_value<std::string>();
      if (key == "data") {
        apply_data(c.data, name, v);
      } else if (key == "ucc") {
        apply_ucc(c.pipeline, name, v);
      } else if (key == "teacher" || key == "student") {
        TrainConfig& t = key == "teacher" ? c.pipeline.teacher : c.pipeline.student;
        const std::string full = key + "." + name;
        if (name == "seed") {
          t.seed = to_u64(full, v);
        } else if (!set_train_key(t, name, full, v)) {
          fail(ErrorCode::kConfigParseError, "unknown key '" + full + "'");
        }
      } else {
        fail(ErrorCode::kConfigParseError, "unknown section '" + key + "'");
      }
    }
  }
  finish(c, overrides);
  return c;
}

RunConfig load_config(const std::filesystem::path& path,
                      const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::kConfigParseError, "cannot read config " + path.string());
  }
  return parse_config(in, overrides);
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream out;
  if (!c.preset.empty()) out << "preset = " << c.preset << '\n';
  out << "seed = " << c.seed << '\n'
      << "threads = " << c.pipeline.threads << '\n'
      << "out = " << c.out.string() << '\n'
      << "teacher_only = " << (c.pipeline.teacher_only ? "true" : "false") << '\n';

  const auto& d = c.data;
  out << "\n[data]\n"
      << "source = " << to_text(d.source) << '\n';
  if (!d.path.empty()) out << "path = " << d.path.string() << '\n';
  out << "format = " << (d.format == Format::kCsv ? "csv" : "tsv") << '\n'
      << "kcore = " << d.kcore << '\n'
      << "split_seed = " << d.split_seed << '\n'
      << "users = " << d.synthetic.num_users << '\n'
      << "items = " << d.synthetic.num_items << '\n'
      << "rank = " << d.synthetic.rank << '\n'
      << "zipf = " << num(d.synthetic.zipf_exponent) << '\n'
      << "sharpness = " << num(d.synthetic.sharpness) << '\n'
      << "min_per_user = " << d.synthetic.min_per_user << '\n'
      << "mean_extra_per_user = " << d.synthetic.mean_extra_per_user << '\n'
      << "synthetic_seed = " << d.synthetic.seed << '\n';

  const auto phase = [&](const char* name, const TrainConfig& t) {
    out << "\n[" << name << "]\n"
        << "lr = " << num(t.lr) << '\n'
        << "lambda = " << num(t.lambda) << '\n'
        << "mu = " << num(t.mu) << '\n'
        << "tau = " << num(t.tau) << '\n'
        << "rho = " << num(t.rho) << '\n'
        << "dim = " << t.dim << '\n'
        << "layers = " << t.layers << '\n'
        << "batch_size = " << t.batch_size << '\n'
        << "max_epochs = " << t.max_epochs << '\n'
        << "patience = " << t.patience << '\n'
        << "init_scale = " << num(t.init_scale) << '\n'
        << "negatives = " << to_text(t.negatives) << '\n'
        << "eval_k = " << t.eval_k << '\n'
        << "seed = " << t.seed << '\n';
  };
  phase("teacher", c.pipeline.teacher);
  phase("student", c.pipeline.student);

  const auto& p = c.pipeline;
  out << "\n[ucc]\n"
      << "gamma = " << num(p.gamma) << '\n'
      << "alpha = " << num(p.alpha) << '\n'
      << "k_cap = " << p.k_cap << '\n'
      << "confidence = " << (p.confidence == Confidence::kSigned ? "signed" : "absolute") << '\n'
      << "momentum = " << (p.momentum == MomentumSchedule::kPerBatch ? "batch" : "epoch") << '\n'
      << "warm_start = " << (p.warm_start ? "true" : "false") << '\n'
      << "pseudo_positives = " << (p.pseudo_positives ? "true" : "false") << '\n';
  return out.str();
}

SplitSet load_data(const DataConfig& d) {
  switch (d.source) {
    case DataSource::kSplit:
      return load_split(d.path);
    case DataSource::kRaw: {
      auto set = load_interactions(d.path, d.format);
      return split(kcore_filter(set, d.kcore), SplitRatios{}, d.split_seed);
    }
    case DataSource::kSynthetic:
      break;
  }
  return split(kcore_filter(make_synthetic(d.synthetic), d.kcore), SplitRatios{},
               d.split_seed);
}

}  // namespace ucc
