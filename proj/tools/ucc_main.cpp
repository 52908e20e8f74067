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


// ucc: command-line driver for the teacher/student cold-start pipeline.
//
//   ucc prepare        --config C --out DIR        build and save the split
//   ucc train-teacher  --config C [--data DIR]     teacher checkpoint
//   ucc generate       --teacher CKPT [--data DIR] pseudo interactions
//   ucc train-student  --teacher CKPT --pseudo P   student checkpoint
//   ucc evaluate       --checkpoint CKPT           metrics report
//   ucc run            --config C                  everything, plus manifest
//
// Failures print one line "error: <Code>: <detail>" on stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <ucc/config.h>
#include <ucc/error.h>
#include <ucc/generation.h>
#include <ucc/pipeline.h>

namespace {

struct Options {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out;
  bool teacher_only = false;
  std::string data;
  std::string teacher;
  std::string pseudo;
  std::string checkpoint;
};

int report(ucc::ErrorCode code, const std::string& message) {
  std::string flat = message;
  for (auto& ch : flat) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  std::cerr << "error: " << ucc::to_string(code) << ": " << flat << '\n';
  switch (code) {
    case ucc::ErrorCode::kUnknownFlag:
    case ucc::ErrorCode::kMissingArgument:
    case ucc::ErrorCode::kConfigParseError:
      return 2;
    default:
      return 1;
  }
}

ucc::RunConfig resolve(const Options& o) {
  ucc::ConfigOverrides ov;
  if (!o.preset.empty()) ov.preset = o.preset;
  ov.seed = o.seed;
  ov.threads = o.threads;
  if (!o.out.empty()) ov.out = o.out;
  ov.teacher_only = o.teacher_only;
  return o.config.empty() ? ucc::default_config(ov)
                          : ucc::load_config(o.config, ov);
}

ucc::SplitSet data_for(const Options& o, const ucc::RunConfig& cfg) {
  if (!o.data.empty()) return ucc::load_split(o.data);
  return ucc::load_data(cfg.data);
}

void require_arg(const std::string& value, const char* flag) {
  if (value.empty()) {
    ucc::fail(ucc::ErrorCode::kMissingArgument,
              std::string(flag) + " is required");
  }
}

void print_phase(const char* name, const ucc::PhaseReport& r) {
  std::printf("%s  val recall@%zu=%.5f ndcg=%.5f  test recall=%.5f ndcg=%.5f",
              name, r.validation.k, r.validation.recall, r.validation.ndcg,
              r.test.recall, r.test.ndcg);
  if (r.test.cold_recall) std::printf("  cold recall=%.5f", *r.test.cold_recall);
  std::printf("\n");
}

ucc::EpochCallback history_to(std::ofstream& out) {
  return [&out](const ucc::EpochRecord& r) {
    ucc::write_history_line(out, r);
    out.flush();
  };
}

int cmd_prepare(const Options& o) {
  const auto cfg = resolve(o);
  const auto data = ucc::load_data(cfg.data);
  const auto dir = cfg.out / "data";
  ucc::save_split(data, dir, cfg.data.format);
  std::printf("users=%zu items=%zu train=%zu validation=%zu test=%zu -> %s\n",
              data.train.num_users, data.train.num_items, data.train.size(),
              data.validation.size(), data.test.size(), dir.c_str());
  return 0;
}

int cmd_train_teacher(const Options& o) {
  const auto cfg = resolve(o);
  const auto data = data_for(o, cfg);
  std::filesystem::create_directories(cfg.out);
  std::ofstream history(cfg.out / "teacher_history.jsonl");
  auto tc = cfg.pipeline.teacher;
  tc.threads = cfg.pipeline.threads;
  const auto result = ucc::train_teacher(data, tc, history_to(history));
  ucc::save_checkpoint(result.best, cfg.out / "teacher.ckpt");
  std::printf("best epoch %zu, val recall@%zu=%.5f -> %s\n", result.best_epoch,
              tc.eval_k, result.best_recall,
              (cfg.out / "teacher.ckpt").c_str());
  return 0;
}

int cmd_generate(const Options& o) {
  require_arg(o.teacher, "--teacher");
  const auto cfg = resolve(o);
  const auto data = data_for(o, cfg);
  const auto teacher = ucc::load_checkpoint(o.teacher);
  const auto out = ucc::propagate(teacher, ucc::build_graph(data.train),
                                  cfg.pipeline.teacher.layers);
  const auto pseudo = ucc::generate(out, data.train, cfg.pipeline.alpha,
                                    cfg.pipeline.k_cap, cfg.pipeline.threads,
                                    cfg.pipeline.confidence);
  std::filesystem::create_directories(cfg.out);
  ucc::save_pseudo(pseudo, cfg.out / "pseudo.tsv");
  std::printf("%zu pseudo interactions -> %s\n", pseudo.size(),
              (cfg.out / "pseudo.tsv").c_str());
  return 0;
}

int cmd_train_student(const Options& o) {
  require_arg(o.teacher, "--teacher");
  require_arg(o.pseudo, "--pseudo");
  const auto cfg = resolve(o);
  const auto data = data_for(o, cfg);
  const auto teacher = ucc::load_checkpoint(o.teacher);
  const auto pseudo = ucc::load_pseudo(o.pseudo);
  std::filesystem::create_directories(cfg.out);
  std::ofstream history(cfg.out / "student_history.jsonl");
  auto pc = cfg.pipeline;
  pc.student.threads = pc.threads;
  const auto result =
      ucc::train_student(data, teacher, pseudo, pc, history_to(history));
  ucc::save_checkpoint(result.best, cfg.out / "student.ckpt");
  std::printf("best epoch %zu, val recall@%zu=%.5f -> %s\n", result.best_epoch,
              pc.student.eval_k, result.best_recall,
              (cfg.out / "student.ckpt").c_str());
  return 0;
}

int cmd_evaluate(const Options& o) {
  require_arg(o.checkpoint, "--checkpoint");
  const auto cfg = resolve(o);
  const auto data = data_for(o, cfg);
  const auto table = ucc::load_checkpoint(o.checkpoint);
  // A student is evaluated over its strong graph.
  const auto graph = o.pseudo.empty()
                         ? ucc::build_graph(data.train)
                         : ucc::student_graph(data, ucc::load_pseudo(o.pseudo));
  const auto& tc = cfg.pipeline.teacher;
  const auto r = ucc::report_phase(data, table, graph, tc.layers, tc.eval_k,
                                   cfg.pipeline.threads);
  std::filesystem::create_directories(cfg.out);
  ucc::write_phase_report(cfg.out / "eval_report.json",
                          cfg.out / "eval_report.csv", r);
  print_phase("model  ", r);
  return 0;
}

int cmd_run(const Options& o) {
  const auto cfg = resolve(o);
  const auto data = ucc::load_data(cfg.data);
  const auto art =
      ucc::run(cfg.pipeline, data, cfg.out, ucc::to_config_text(cfg));
  print_phase("teacher", art.teacher);
  if (art.student) {
    std::printf("pseudo interactions: %zu\n", art.num_pseudo);
    print_phase("student", *art.student);
  }
  std::printf("manifest: %s\n", art.manifest.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UCC teacher/student training for cold-start recommendation",
               "ucc"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Config file (key = value, [sections])");
    sub->add_option("--preset", o.preset,
                    "Hyper-parameter preset: yelp, amazon-book, movielens-1m");
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--threads", o.threads,
                    "Worker threads for evaluation and generation (1 = bit-exact)");
    sub->add_option("--out", o.out, "Output directory");
  };
  const auto data_flag = [&](CLI::App* sub) {
    sub->add_option("--data", o.data, "Split directory written by 'prepare'");
  };

  auto* prepare = app.add_subcommand("prepare", "Load, k-core filter and split");
  common(prepare);
  auto* teacher = app.add_subcommand("train-teacher", "Train the teacher");
  common(teacher);
  data_flag(teacher);
  auto* gen = app.add_subcommand("generate", "Generate pseudo interactions");
  common(gen);
  data_flag(gen);
  gen->add_option("--teacher", o.teacher, "Teacher checkpoint");
  auto* student = app.add_subcommand("train-student", "Train the student");
  common(student);
  data_flag(student);
  student->add_option("--teacher", o.teacher, "Teacher checkpoint");
  student->add_option("--pseudo", o.pseudo, "Pseudo interaction file");
  auto* eval = app.add_subcommand("evaluate", "Evaluate a checkpoint");
  common(eval);
  data_flag(eval);
  eval->add_option("--checkpoint", o.checkpoint, "Checkpoint to evaluate");
  eval->add_option("--pseudo", o.pseudo,
                   "Pseudo file; evaluates over the strong graph");
  auto* run = app.add_subcommand("run", "Full pipeline with manifest");
  common(run);
  run->add_flag("--teacher-only", o.teacher_only,
                "Skip generation and the student");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ExtrasError& e) {
    return report(ucc::ErrorCode::kUnknownFlag, e.what());
  } catch (const CLI::ParseError& e) {
    return report(ucc::ErrorCode::kMissingArgument, e.what());
  }

  try {
    if (*prepare) return cmd_prepare(o);
    if (*teacher) return cmd_train_teacher(o);
    if (*gen) return cmd_generate(o);
    if (*student) return cmd_train_student(o);
    if (*eval) return cmd_evaluate(o);
    if (*run) return cmd_run(o);
  } catch (const ucc::Error& e) {
    return report(e.code(), e.what());
  } catch (const std::exception& e) {
    return report(ucc::ErrorCode::kIo, e.what());
  }
  return 0;
}
