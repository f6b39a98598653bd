#include "docreward/vision_reward.hpp"

#include <algorithm>
#include <cmath>

#include "docreward/errors.hpp"

namespace docreward {

void VisionRewardConfig::validate() const {
  if (omega_global < 0 || omega_local < 0)
    throw ConfigError("vision weights must be non-negative");
  if (std::abs(omega_global + omega_local - 1.0) > 1e-9)
    throw ConfigError("vision weights must sum to 1 (got " +
                      std::to_string(omega_global + omega_local) + ")");
  if (grid_rows <= 0 || grid_cols <= 0) throw ConfigError("patch grid must be positive");
  if (thumbnail_size <= 0) throw ConfigError("thumbnail size must be positive");
}

namespace {

double clamped_similarity(EmbeddingBackend& backend, const RasterImage& a,
                          const RasterImage& b) {
  return std::clamp(cosine_similarity(backend.embed(a), backend.embed(b)), 0.0, 1.0);
}

}  // namespace

VisionScore multiscale_vision_score(const RasterImage& pred, const RasterImage& gt,
                                    const VisionRewardConfig& cfg, EmbeddingBackend& backend) {
  cfg.validate();
  const auto pred_patches = make_patches(pred, cfg.grid_rows, cfg.grid_cols);
  const auto gt_patches = make_patches(gt, cfg.grid_rows, cfg.grid_cols);

  VisionScore out;
  const int side = cfg.thumbnail_size;
  out.global = clamped_similarity(backend, resize_box(pred, side, side), resize_box(gt, side, side));

  double sum = 0.0;
  for (std::size_t i = 0; i < gt_patches.size(); ++i) {
    out.local.push_back(clamped_similarity(backend, pred_patches[i], gt_patches[i]));
    sum += out.local.back();
  }
  out.local_mean = sum / static_cast<double>(out.local.size());
  out.reward = cfg.omega_global * out.global + cfg.omega_local * out.local_mean;
  return out;
}

}  // namespace docreward
