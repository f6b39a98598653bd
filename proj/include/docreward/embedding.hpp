#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "docreward/image.hpp"

namespace docreward {

// Unit-length feature vector. The constructor rejects empty and zero
// vectors and L2-normalizes the rest.
class EmbeddingVector {
 public:
  explicit EmbeddingVector(std::vector<double> values);

  std::size_t dim() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const EmbeddingVector&) const = default;

 private:
  std::vector<double> values_;
};

// dot(u, v) / (|u| |v|), clamped to [-1, 1] against rounding. Throws
// ContractError on dimension mismatch.
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  // Implementations must be safe to call from several threads at once.
  virtual EmbeddingVector embed(const RasterImage& img) = 0;
  virtual std::string name() const = 0;
};

// Deterministic stand-in encoder: 8x8 box-filtered luma, mean removed,
// L2-normalized. Constant images (nothing left after mean removal) map to
// the canonical vector with every entry 1/8.
EmbeddingVector stub_embed(const RasterImage& img);

class StubBackend final : public EmbeddingBackend {
 public:
  EmbeddingVector embed(const RasterImage& img) override { return stub_embed(img); }
  std::string name() const override { return "stub"; }
};

struct RemoteBackendOptions {
  std::string endpoint;  // scheme://host:port, e.g. http://127.0.0.1:8400
  std::string embed_path = "/embed";
  std::string health_path = "/health";
  std::chrono::milliseconds timeout{10000};
  int retries = 2;       // extra attempts after the first
  int max_in_flight = 4;
};

// Client for an external encoder service.
//
// POST {embed_path} with Content-Type image/png and the PNG body; the reply
// is JSON {"dim": int, "values": [float, ...]}. GET {health_path} replies
// {"dim": int}. Transport failures and non-2xx statuses are retried;
// malformed replies and dimension mismatches are not.
class RemoteBackend final : public EmbeddingBackend {
 public:
  explicit RemoteBackend(RemoteBackendOptions options);

  // Queries the health endpoint and remembers the advertised dimension.
  // Throws TransportError.
  std::size_t probe();

  EmbeddingVector embed(const RasterImage& img) override;
  std::string name() const override { return "remote"; }

  std::optional<std::size_t> advertised_dim() const {
    const std::size_t d = advertised_dim_.load();
    return d == 0 ? std::nullopt : std::optional<std::size_t>(d);
  }

 private:
  RemoteBackendOptions options_;
  std::atomic<std::size_t> advertised_dim_{0};
  std::counting_semaphore<> in_flight_;
};

// Convenience wrapper for one-off calls.
EmbeddingVector remote_embed(const RasterImage& img, const RemoteBackendOptions& options);

}  // namespace docreward
