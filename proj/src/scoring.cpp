#include "docreward/scoring.hpp"

#include <atomic>
#include <exception>
#include <optional>
#include <thread>

#include "docreward/errors.hpp"
#include "docreward/format_detect.hpp"
#include "docreward/segment.hpp"

namespace docreward {

namespace {

SegmentedContent segment_prediction(const std::string& text, std::vector<std::string>& warnings) {
  try {
    return segment_content(text, SegmentMode::strict);
  } catch (const SegmentationError& e) {
    warnings.push_back(std::string("prediction segmentation: ") + e.what() +
                       "; remainder scored as plain text");
    return segment_content(text, SegmentMode::lenient);
  }
}

// Formula records often carry bare LaTeX with no math delimiters.
void treat_as_formula(SegmentedContent& seg, const std::string& source) {
  if (!seg.formulas.empty() || !seg.tables.empty()) return;
  seg = SegmentedContent{};
  seg.formulas.push_back(source);
  seg.order.push_back({ContentType::formula, 0, Delimiter::none});
}

std::filesystem::path resolve(const std::filesystem::path& root, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : root / path;
}

void score_text(const EvalRecord& rec, ScoredRecord& out) {
  SegmentedContent gt;
  try {
    gt = segment_content(rec.ground_truth, SegmentMode::strict);
  } catch (const SegmentationError& e) {
    out.warnings.push_back(std::string("ground truth segmentation: ") + e.what());
    TextRewardBreakdown empty;
    empty.warnings.push_back("ground truth has no scoreable content");
    out.text = std::move(empty);
    return;
  }
  SegmentedContent pred = segment_prediction(rec.prediction, out.warnings);
  if (rec.domain == Domain::formula) {
    treat_as_formula(gt, rec.ground_truth);
    treat_as_formula(pred, rec.prediction);
  }
  out.text = aggregate_text_reward(pred, gt);
}

void score_vision(const EvalRecord& rec, const ScoringContext& ctx, ScoredRecord& out) {
  VisionBreakdown v;
  const CodeFormat expected = *expected_format(rec.domain);
  v.expected_format = std::string(to_string(expected));
  if (auto detected = detect_format(rec.prediction)) v.detected_format = std::string(to_string(*detected));
  v.format_alignment = format_alignment_reward(rec.prediction, expected);

  if (!ctx.vision_enabled) {
    out.vision = std::move(v);
    return;
  }

  std::optional<RasterImage> gt_img;
  try {
    gt_img = load_image(resolve(ctx.image_root, rec.gt_image_path.value()));
  } catch (const ImageError& e) {
    out.warnings.push_back(std::string("ground truth image: ") + e.what());
    out.vision = std::move(v);
    return;
  }

  std::optional<RasterImage> pred_img;
  if (rec.pred_image_path) {
    try {
      pred_img = load_image(resolve(ctx.image_root, *rec.pred_image_path));
    } catch (const ImageError& e) {
      out.warnings.push_back(std::string("prediction image: ") + e.what());
      out.vision = std::move(v);
      return;
    }
  } else if (ctx.renderer && ctx.renderer->has(expected)) {
    RenderOutcome r = ctx.renderer->render(rec.prediction, expected);
    v.render_attempted = true;
    v.render_succeeded = r.ok();
    v.render_status = std::string(to_string(r.status));
    if (!r.ok()) {
      out.warnings.push_back("render failed: " + r.message);
      v.visual = 0.0;
      out.vision = std::move(v);
      return;
    }
    pred_img = std::move(r.image);
  } else {
    out.warnings.push_back("no prediction image and no renderer for " + v.expected_format +
                           "; visual reward not scored");
    out.vision = std::move(v);
    return;
  }

  try {
    VisionScore s = multiscale_vision_score(*pred_img, *gt_img, ctx.vision, *ctx.backend);
    v.visual = s.reward;
    v.global = s.global;
    v.local_mean = s.local_mean;
  } catch (const TransportError& e) {
    out.warnings.push_back(std::string("embedding backend: ") + e.what() + "; visual reward not scored");
  } catch (const ContractError& e) {
    out.warnings.push_back(std::string("visual reward: ") + e.what());
  }
  out.vision = std::move(v);
}

}  // namespace

void check_vision_requirements(const std::vector<EvalRecord>& records, bool vision_enabled) {
  if (!vision_enabled) return;
  for (const EvalRecord& r : records)
    if (is_vision_domain(r.domain) && !r.gt_image_path)
      throw DatasetError("record '" + r.id + "' (" + std::string(to_string(r.domain)) +
                         ") has no gt_image_path but the visual reward is enabled");
}

ScoredRecord score_record(const EvalRecord& rec, const ScoringContext& ctx) {
  ScoredRecord out;
  out.id = rec.id;
  out.domain = rec.domain;
  if (is_vision_domain(rec.domain)) {
    if (ctx.vision_enabled && !ctx.backend) throw ConfigError("no embedding backend configured");
    if (ctx.vision_enabled && !rec.gt_image_path)
      throw DatasetError("record '" + rec.id + "' has no gt_image_path");
    score_vision(rec, ctx, out);
  } else {
    score_text(rec, out);
  }
  return out;
}

std::vector<ScoredRecord> score_records(const std::vector<EvalRecord>& records,
                                        const ScoringContext& ctx, int workers) {
  const std::size_t n = records.size();
  std::vector<std::optional<ScoredRecord>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto work = [&] {
    for (std::size_t i = next++; i < n && !failed.load(); i = next++) {
      try {
        results[i] = score_record(records[i], ctx);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };

  const int threads = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<ScoredRecord> out;
  out.reserve(n);
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

}  // namespace docreward
