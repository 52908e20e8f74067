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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <ucc/dataset.h>
#include <ucc/encoder.h>
#include <ucc/eval.h>
#include <ucc/generation.h>
#include <ucc/trainer.h>
#include <ucc/types.h>

namespace ucc {

enum class MomentumSchedule { kPerEpoch, kPerBatch };

struct PipelineConfig {
  TrainConfig teacher;
  TrainConfig student;
  double gamma = 0.3;  // share of the student kept at each accumulation
  double alpha = 1.0;
  std::size_t k_cap = 5;
  Confidence confidence = Confidence::kAbsolute;
  MomentumSchedule momentum = MomentumSchedule::kPerEpoch;
  bool warm_start = true;        // student starts from the teacher table
  bool pseudo_positives = true;  // pseudo edges are also BPR positives
  bool teacher_only = false;
  std::size_t threads = 1;
};

void validate(const PipelineConfig& config);

using EpochCallback = std::function<void(const EpochRecord&)>;

/// BPR on the training graph plus consistency between two independently
/// edge-dropped views, both resampled every epoch.
TrainResult train_teacher(const SplitSet& data, const TrainConfig& config,
                          const EpochCallback& on_epoch = {});

/// gamma * student + (1 - gamma) * teacher, over user and item rows.
EmbeddingTable momentum_accumulate(const EmbeddingTable& student,
                                   const EmbeddingTable& teacher, double gamma);
void momentum_accumulate_into(EmbeddingTable& student,
                              const EmbeddingTable& teacher, double gamma);

/// Student phase: BPR over the strong graph (training + pseudo edges),
/// consistency between a weak view of the training graph (anchor) and the
/// strong graph, and momentum accumulation of the frozen teacher.
TrainResult train_student(const SplitSet& data, const EmbeddingTable& teacher,
                          const PseudoInteractionSet& pseudo,
                          const PipelineConfig& config,
                          const EpochCallback& on_epoch = {});

/// Graph that evaluation of a phase propagates over.
BipartiteGraph student_graph(const SplitSet& data,
                             const PseudoInteractionSet& pseudo);

struct PhaseReport {
  MetricsReport validation;
  MetricsReport test;
};

/// Validation and test metrics (with popularity groups) of a table
/// propagated over `graph`.
PhaseReport report_phase(const SplitSet& data, const EmbeddingTable& table,
                         const BipartiteGraph& graph, std::size_t layers,
                         std::size_t k, std::size_t threads);

void write_phase_report(const std::filesystem::path& json_path,
                        const std::filesystem::path& csv_path,
                        const PhaseReport& report);

struct PipelineArtifacts {
  std::filesystem::path dir;
  std::filesystem::path teacher_ckpt;
  std::filesystem::path pseudo_path;
  std::filesystem::path student_ckpt;
  std::filesystem::path manifest;
  PhaseReport teacher;
  std::optional<PhaseReport> student;
  std::size_t num_pseudo = 0;
};

/// teacher -> generate -> student -> evaluate, writing every artifact and a
/// manifest into `out_dir`. `config_echo` is copied verbatim to the head of
/// the manifest. On failure a FAILED marker is left next to whatever was
/// already written and the error is rethrown.
PipelineArtifacts run(const PipelineConfig& config, const SplitSet& data,
                      const std::filesystem::path& out_dir,
                      std::string_view config_echo = {});

}  // namespace ucc
