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
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include <ucc/error.h>

#include "test_util.h"

namespace ucc {
namespace {

std::filesystem::path source_dir() {
  const char* dir = std::getenv("UCC_SOURCE_DIR");
  return dir ? dir : UCC_SOURCE_DIR_DEFAULT;
}

// Published table, as text.
const std::map<std::string, std::map<std::string, std::string>> kTable = {
    {"yelp", {{"lr", "1e-4"}, {"lambda", "1e-4"}, {"mu", "0.1"}, {"D", "64"}, {"K", "5"}, {"gamma", "0.3"}}},
    {"amazon-book", {{"lr", "1e-4"}, {"lambda", "1e-4"}, {"mu", "0.5"}, {"D", "64"}, {"K", "20"}, {"gamma", "0.3"}}},
    {"movielens-1m", {{"lr", "1e-4"}, {"lambda", "1e-3"}, {"mu", "0.02"}, {"D", "64"}, {"K", "5"}, {"gamma", "0.9"}}},
};

double num(const std::string& s) {
  double x = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), x);
  return x;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(Presets, BuiltinsMatchTable) {
  ASSERT_EQ(builtin_presets().size(), 3u);
  for (const auto& [name, row] : kTable) {
    const auto& p = find_preset(name);
    EXPECT_EQ(p.lr, num(row.at("lr")));
    EXPECT_EQ(p.lambda, num(row.at("lambda")));
    EXPECT_EQ(p.mu, num(row.at("mu")));
    EXPECT_EQ(p.dim, static_cast<std::size_t>(num(row.at("D"))));
    EXPECT_EQ(p.k_cap, static_cast<std::size_t>(num(row.at("K"))));
    EXPECT_EQ(p.gamma, num(row.at("gamma")));
  }
}

TEST(Presets, ShippedFileMatchesTableText) {
  std::ifstream in(source_dir() / "configs" / "presets.cfg");
  ASSERT_TRUE(in);
  std::map<std::string, std::map<std::string, std::string>> file;
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '[') {
      section = line.substr(1, line.find(']') - 1);
      continue;
    }
    const auto eq = line.find(" = ");
    file[section][line.substr(0, eq)] = line.substr(eq + 3);
  }
  EXPECT_EQ(file, kTable);
}

TEST(Presets, SelectingAPresetSetsBothPhases) {
  ConfigOverrides o;
  o.preset = "movielens-1m";
  const auto c = default_config(o);
  EXPECT_EQ(c.pipeline.teacher.lambda, 1e-3);
  EXPECT_EQ(c.pipeline.student.mu, 0.02);
  EXPECT_EQ(c.pipeline.gamma, 0.9);
  EXPECT_EQ(c.pipeline.k_cap, 5u);
  EXPECT_EQ(code_of([] {
              ConfigOverrides bad;
              bad.preset = "netflix";
              default_config(bad);
            }),
            ErrorCode::kConfigParseError);
}

TEST(Config, DefaultsFollowTable) {
  const auto c = default_config();
  EXPECT_EQ(c.pipeline.teacher.lr, 1e-4);
  EXPECT_EQ(c.pipeline.teacher.dim, 64u);
}

TEST(Config, PrecedenceKeysOverPresetOverridesOverKeys) {
  std::istringstream in("preset = yelp\nseed = 3\n[train]\nmu = 0.7\n[student]\nmu = 0.2\n[ucc]\nk_cap = 9\n");
  ConfigOverrides o;
  o.seed = 5;
  o.threads = 2;
  const auto c = parse_config(in, o);
  EXPECT_EQ(c.pipeline.teacher.mu, 0.7);
  EXPECT_EQ(c.pipeline.student.mu, 0.2);
  EXPECT_EQ(c.pipeline.k_cap, 9u);
  EXPECT_EQ(c.pipeline.gamma, 0.3);
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.pipeline.threads, 2u);
}

TEST(Config, TextRoundTrips) {
  std::istringstream in("preset = amazon-book\nseed = 12\n[train]\nlr = 0.1\ntau = 0.15\n[data]\nusers = 50\n");
  const auto c = parse_config(in);
  const auto text = to_config_text(c);
  std::istringstream back(text);
  EXPECT_EQ(to_config_text(parse_config(back)), text);
}

TEST(Config, UnknownKeyAndBadValue) {
  std::istringstream unknown("[train]\nlearning_rate = 1\n");
  EXPECT_EQ(code_of([&] { parse_config(unknown); }), ErrorCode::kConfigParseError);
  std::istringstream bad("[train]\nlr = fast\n");
  EXPECT_EQ(code_of([&] { parse_config(bad); }), ErrorCode::kConfigParseError);
}

TEST(Config, MissingFile) {
  EXPECT_EQ(code_of([] { load_config("/nonexistent/ucc.cfg"); }),
            ErrorCode::kConfigParseError);
}

TEST(Config, FixtureLoads) {
  const auto c = load_config(source_dir() / "configs" / "fixture.cfg");
  EXPECT_EQ(c.data.source, DataSource::kSynthetic);
  EXPECT_EQ(c.pipeline.teacher.dim, 16u);
}

}  // namespace
}  // namespace ucc
