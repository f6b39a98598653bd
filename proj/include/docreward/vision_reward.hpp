#pragma once

#include <vector>

#include "docreward/embedding.hpp"
#include "docreward/image.hpp"

namespace docreward {

struct VisionRewardConfig {
  double omega_global = 0.5;
  double omega_local = 0.5;
  int grid_rows = 3;
  int grid_cols = 3;
  int thumbnail_size = 224;

  // Throws ConfigError unless both weights are >= 0 and sum to 1 (within
  // 1e-9) and the grid and thumbnail sizes are positive.
  void validate() const;
};

struct VisionScore {
  double global = 0.0;              // clamped to [0, 1]
  std::vector<double> local;        // one clamped similarity per patch
  double local_mean = 0.0;
  double reward = 0.0;
};

// Global similarity on square thumbnails plus the mean similarity of
// corresponding grid patches, combined with the configured weights. Raw
// cosines are clamped to [0, 1] before weighting.
VisionScore multiscale_vision_score(const RasterImage& pred, const RasterImage& gt,
                                    const VisionRewardConfig& cfg, EmbeddingBackend& backend);

inline double multiscale_vision_reward(const RasterImage& pred, const RasterImage& gt,
                                       const VisionRewardConfig& cfg,
                                       EmbeddingBackend& backend) {
  return multiscale_vision_score(pred, gt, cfg, backend).reward;
}

}  // namespace docreward
