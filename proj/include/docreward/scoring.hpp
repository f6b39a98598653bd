#pragma once

#include <filesystem>
#include <vector>

#include "docreward/bench.hpp"
#include "docreward/corpus.hpp"
#include "docreward/embedding.hpp"
#include "docreward/render.hpp"
#include "docreward/vision_reward.hpp"

namespace docreward {

struct ScoringContext {
  VisionRewardConfig vision;
  bool vision_enabled = true;
  EmbeddingBackend* backend = nullptr;  // required when vision is enabled
  Renderer* renderer = nullptr;         // optional
  std::filesystem::path image_root;     // base for relative image paths
};

// Text domains go through segmentation and the per-type text rewards;
// vision domains get format alignment plus, when enabled, the multi-scale
// visual reward on the prediction image (given or rendered).
//
// Data problems local to a record become warnings on it. Transport failures
// leave the visual reward unset. ConfigError propagates.
ScoredRecord score_record(const EvalRecord& record, const ScoringContext& ctx);

// Scores records on `workers` threads; the result is in input order and does
// not depend on the worker count. The first exception (by record position)
// is rethrown after all workers have stopped.
std::vector<ScoredRecord> score_records(const std::vector<EvalRecord>& records,
                                        const ScoringContext& ctx, int workers);

// Throws DatasetError if vision is enabled and a vision record lacks a
// ground-truth image path.
void check_vision_requirements(const std::vector<EvalRecord>& records, bool vision_enabled);

}  // namespace docreward
