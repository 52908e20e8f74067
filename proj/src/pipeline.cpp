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


#include <ucc/pipeline.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <ucc/error.h>
#include <ucc/generation.h>
#include <ucc/graph.h>
#include <ucc/hashing.h>

namespace ucc {

void validate(const PipelineConfig& c) {
  validate(c.teacher);
  validate(c.student);
  require(c.gamma >= 0.0 && c.gamma <= 1.0, ErrorCode::kInvalidArgument,
          "gamma must lie in [0, 1]");
  require(c.alpha > 0.0, ErrorCode::kInvalidArgument, "alpha must be > 0");
  require(c.k_cap >= 1, ErrorCode::kInvalidArgument, "k_cap must be >= 1");
  require(c.teacher.dim == c.student.dim, ErrorCode::kInvalidArgument,
          "teacher and student must share the embedding size");
}

namespace {

// Seed streams.
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kAnchorViewStream = 2;
constexpr std::uint64_t kPositiveViewStream = 3;

std::vector<Interaction> with_pseudo(const InteractionSet& train,
                                     const PseudoInteractionSet& pseudo) {
  std::vector<Interaction> pairs = train.pairs;
  for (const auto& t : pseudo.triples) pairs.push_back({t.user, t.item});
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

}  // namespace

TrainResult train_teacher(const SplitSet& data, const TrainConfig& config,
                          const EpochCallback& on_epoch) {
  validate(config);
  const BipartiteGraph graph = build_graph(data.train);

  TrainingPlan plan;
  plan.rec_graph = &graph;
  plan.eval_graph = &graph;
  plan.positives = data.train.pairs;
  plan.tag = GraphTag::kOriginal;
  plan.views = [&](std::size_t epoch) {
    return ConsistencyViews{
        weak_augment(graph, config.rho,
                     derive_seed(config.seed, kAnchorViewStream, epoch)),
        weak_augment(graph, config.rho,
                     derive_seed(config.seed, kPositiveViewStream, epoch))};
  };

  auto initial = init_embeddings(data.train.num_users, data.train.num_items,
                                 config.dim,
                                 derive_seed(config.seed, kInitStream, 0),
                                 config.init_scale);
  return train(plan, config, std::move(initial), data.validation, data.train,
               on_epoch);
}

EmbeddingTable momentum_accumulate(const EmbeddingTable& student,
                                   const EmbeddingTable& teacher,
                                   double gamma) {
  EmbeddingTable out = student;
  momentum_accumulate_into(out, teacher, gamma);
  return out;
}

void momentum_accumulate_into(EmbeddingTable& student,
                              const EmbeddingTable& teacher, double gamma) {
  if (student.num_users != teacher.num_users ||
      student.num_items != teacher.num_items || student.dim() != teacher.dim()) {
    fail(ErrorCode::kShapeMismatch, "student and teacher tables differ in shape");
  }
  require(gamma >= 0.0 && gamma <= 1.0, ErrorCode::kInvalidArgument,
          "gamma must lie in [0, 1]");
  auto& s = student.data.values();
  const auto& t = teacher.data.values();
  if (gamma == 1.0) return;
  if (gamma == 0.0) {
    s = t;
    return;
  }
  for (std::size_t k = 0; k < s.size(); ++k) {
    // t + gamma * (s - t), clamped to the segment against rounding.
    const double blended = t[k] + gamma * (s[k] - t[k]);
    s[k] = std::clamp(blended, std::min(s[k], t[k]), std::max(s[k], t[k]));
  }
}

BipartiteGraph student_graph(const SplitSet& data,
                             const PseudoInteractionSet& pseudo) {
  return strong_augment(build_graph(data.train), pseudo);
}

TrainResult train_student(const SplitSet& data, const EmbeddingTable& teacher,
                          const PseudoInteractionSet& pseudo,
                          const PipelineConfig& config,
                          const EpochCallback& on_epoch) {
  validate(config);
  const TrainConfig& sc = config.student;
  if (teacher.num_users != data.train.num_users ||
      teacher.num_items != data.train.num_items || teacher.dim() != sc.dim) {
    fail(ErrorCode::kShapeMismatch, "teacher table does not fit the data");
  }
  const BipartiteGraph graph = build_graph(data.train);
  const BipartiteGraph strong = strong_augment(graph, pseudo);

  TrainingPlan plan;
  plan.rec_graph = &strong;
  plan.eval_graph = &strong;
  plan.positives = config.pseudo_positives ? with_pseudo(data.train, pseudo)
                                           : data.train.pairs;
  plan.tag = GraphTag::kStrong;
  plan.views = [&](std::size_t epoch) {
    return ConsistencyViews{
        weak_augment(graph, sc.rho,
                     derive_seed(sc.seed, kAnchorViewStream, epoch)),
        strong};
  };
  const double gamma = config.gamma;
  auto accumulate = [&teacher, gamma](EmbeddingTable& table) {
    momentum_accumulate_into(table, teacher, gamma);
  };
  if (config.momentum == MomentumSchedule::kPerBatch) {
    plan.after_batch = accumulate;
  } else {
    plan.after_epoch = accumulate;
  }

  EmbeddingTable initial =
      config.warm_start
          ? teacher
          : init_embeddings(data.train.num_users, data.train.num_items, sc.dim,
                            derive_seed(sc.seed, kInitStream, 0), sc.init_scale);
  return train(plan, sc, std::move(initial), data.validation, data.train,
               on_epoch);
}

PhaseReport report_phase(const SplitSet& data, const EmbeddingTable& table,
                         const BipartiteGraph& graph, std::size_t layers,
                         std::size_t k, std::size_t threads) {
  const auto out = propagate(table, graph, layers);
  const auto groups = popularity_groups(data.train);
  return {evaluate_with_groups(out, data.validation, data.train, groups, k, threads),
          evaluate_with_groups(out, data.test, data.train, groups, k, threads)};
}

void write_phase_report(const std::filesystem::path& json_path,
                        const std::filesystem::path& csv_path,
                        const PhaseReport& report) {
  {
    std::ostringstream val, test;
    write_report_json(val, report.validation);
    write_report_json(test, report.test);
    std::ofstream out(json_path);
    if (!out) fail(ErrorCode::kIo, "cannot write " + json_path.string());
    out << "{\n\"validation\": " << val.str() << ",\n\"test\": " << test.str()
        << "}\n";
  }
  std::ofstream csv(csv_path);
  if (!csv) fail(ErrorCode::kIo, "cannot write " + csv_path.string());
  write_report_csv(csv, report.test);
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_history(const std::filesystem::path& path,
                   const std::vector<EpochRecord>& history) {
  std::ofstream out(path);
  for (const auto& r : history) write_history_line(out, r);
}

void append_metrics(std::ostream& out, const std::string& prefix,
                    const PhaseReport& r) {
  out << prefix << "val_recall = " << num(r.validation.recall) << '\n'
      << prefix << "val_ndcg = " << num(r.validation.ndcg) << '\n'
      << prefix << "test_recall = " << num(r.test.recall) << '\n'
      << prefix << "test_ndcg = " << num(r.test.ndcg) << '\n';
  if (r.test.cold_recall) {
    out << prefix << "test_cold_recall = " << num(*r.test.cold_recall) << '\n';
  }
}

}  // namespace

PipelineArtifacts run(const PipelineConfig& config, const SplitSet& data,
                      const std::filesystem::path& out_dir,
                      std::string_view config_echo) {
  validate(config);
  std::filesystem::create_directories(out_dir);
  const auto failed_marker = out_dir / "FAILED";
  std::filesystem::remove(failed_marker);

  PipelineArtifacts art;
  art.dir = out_dir;
  art.teacher_ckpt = out_dir / "teacher.ckpt";
  art.manifest = out_dir / "manifest.cfg";
  try {
    auto teacher_cfg = config.teacher;
    teacher_cfg.threads = config.threads;
    const auto teacher = train_teacher(data, teacher_cfg);
    save_checkpoint(teacher.best, art.teacher_ckpt);
    write_history(out_dir / "teacher_history.jsonl", teacher.history);

    const BipartiteGraph graph = build_graph(data.train);
    art.teacher = report_phase(data, teacher.best, graph, teacher_cfg.layers,
                               teacher_cfg.eval_k, config.threads);
    write_phase_report(out_dir / "teacher_report.json",
                       out_dir / "teacher_report.csv", art.teacher);

    if (!config.teacher_only) {
      const auto teacher_out = propagate(teacher.best, graph, teacher_cfg.layers);
      const auto pseudo = generate(teacher_out, data.train, config.alpha,
                                   config.k_cap, config.threads,
                                   config.confidence);
      art.pseudo_path = out_dir / "pseudo.tsv";
      save_pseudo(pseudo, art.pseudo_path);
      art.num_pseudo = pseudo.size();

      // The student trains on exactly what was persisted.
      const auto persisted = load_pseudo(art.pseudo_path);
      auto pcfg = config;
      pcfg.student.threads = config.threads;
      const auto student = train_student(data, teacher.best, persisted, pcfg);
      art.student_ckpt = out_dir / "student.ckpt";
      save_checkpoint(student.best, art.student_ckpt);
      write_history(out_dir / "student_history.jsonl", student.history);
      art.student = report_phase(data, student.best,
                                 student_graph(data, persisted),
                                 pcfg.student.layers, pcfg.student.eval_k,
                                 config.threads);
      write_phase_report(out_dir / "student_report.json",
                         out_dir / "student_report.csv", *art.student);
    }

    std::ofstream manifest(art.manifest);
    if (!manifest) fail(ErrorCode::kIo, "cannot write " + art.manifest.string());
    manifest << config_echo;
    if (!config_echo.empty() && config_echo.back() != '\n') manifest << '\n';
    manifest << "\n[artifacts]\n";
    const auto hash_line = [&](const char* name, const std::filesystem::path& p) {
      manifest << name << " = " << sha256_file(p) << '\n';
    };
    hash_line("teacher_ckpt", art.teacher_ckpt);
    hash_line("teacher_report", out_dir / "teacher_report.json");
    if (art.student) {
      hash_line("pseudo", art.pseudo_path);
      hash_line("student_ckpt", art.student_ckpt);
      hash_line("student_report", out_dir / "student_report.json");
    }
    manifest << "\n[metrics]\n";
    manifest << "teacher_best_epoch = " << teacher.best_epoch << '\n';
    append_metrics(manifest, "teacher_", art.teacher);
    if (art.student) {
      manifest << "num_pseudo = " << art.num_pseudo << '\n';
      append_metrics(manifest, "student_", *art.student);
    }
  } catch (const std::exception& e) {
    std::ofstream marker(failed_marker);
    marker << e.what() << '\n';
    throw;
  }
  return art;
}

}  // namespace ucc
