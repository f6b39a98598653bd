#include "docreward/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "docreward/errors.hpp"

namespace docreward {

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ContractError("embedding must have positive dimension");
  double norm2 = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v)) throw ContractError("embedding contains a non-finite value");
    norm2 += v * v;
  }
  if (norm2 <= 0.0) throw ContractError("embedding must not be the zero vector");
  const double norm = std::sqrt(norm2);
  for (double& v : values_) v /= norm;
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dim() != v.dim())
    throw ContractError("cosine_similarity: dimension mismatch (" + std::to_string(u.dim()) +
                        " vs " + std::to_string(v.dim()) + ")");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) {
    dot += u.values()[i] * v.values()[i];
    nu += u.values()[i] * u.values()[i];
    nv += v.values()[i] * v.values()[i];
  }
  return std::clamp(dot / std::sqrt(nu * nv), -1.0, 1.0);
}

EmbeddingVector stub_embed(const RasterImage& img) {
  constexpr int kSide = 8;
  std::vector<double> v = resize_box_gray(img, kSide, kSide);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double norm2 = 0.0;
  for (double& x : v) {
    x -= mean;
    norm2 += x * x;
  }
  // Anything this small is rounding noise from a constant image.
  if (norm2 < 1e-18) std::fill(v.begin(), v.end(), 1.0 / kSide);
  return EmbeddingVector(std::move(v));
}

namespace {

httplib::Client make_client(const RemoteBackendOptions& o) {
  httplib::Client cli(o.endpoint);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(o.timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(o.timeout - secs);
  cli.set_connection_timeout(secs.count(), static_cast<time_t>(usecs.count()));
  cli.set_read_timeout(secs.count(), static_cast<time_t>(usecs.count()));
  cli.set_write_timeout(secs.count(), static_cast<time_t>(usecs.count()));
  return cli;
}

class SemaphoreGuard {
 public:
  explicit SemaphoreGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SemaphoreGuard() { s_.release(); }
  SemaphoreGuard(const SemaphoreGuard&) = delete;
  SemaphoreGuard& operator=(const SemaphoreGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

// Non-retryable reply problems.
struct BadReply {
  std::string what;
};

std::size_t read_dim(const nlohmann::json& j) {
  auto it = j.find("dim");
  if (it == j.end() || !it->is_number_integer() || it->get<long long>() <= 0)
    throw BadReply{"reply lacks a positive integer 'dim'"};
  return static_cast<std::size_t>(it->get<long long>());
}

}  // namespace

RemoteBackend::RemoteBackend(RemoteBackendOptions options)
    : options_(std::move(options)), in_flight_(std::max(1, options_.max_in_flight)) {
  if (options_.endpoint.empty()) throw ConfigError("remote embedding endpoint is empty");
  if (options_.retries < 0) throw ConfigError("remote embedding retries must be >= 0");
}

std::size_t RemoteBackend::probe() {
  const int attempts_allowed = options_.retries + 1;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts_allowed; ++attempt) {
    SemaphoreGuard guard(in_flight_);
    auto cli = make_client(options_);
    auto res = cli.Get(options_.health_path);
    if (!res) {
      last_error = "health probe to " + options_.endpoint + " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_error = "health probe returned HTTP " + std::to_string(res->status);
      continue;
    }
    try {
      const std::size_t dim = read_dim(nlohmann::json::parse(res->body));
      advertised_dim_.store(dim);
      return dim;
    } catch (const nlohmann::json::exception& e) {
      throw TransportError(std::string("health probe reply is not JSON: ") + e.what(), attempt);
    } catch (const BadReply& e) {
      throw TransportError("health probe: " + e.what, attempt);
    }
  }
  throw TransportError(last_error, attempts_allowed);
}

EmbeddingVector RemoteBackend::embed(const RasterImage& img) {
  const std::vector<std::uint8_t> png = encode_png(img);
  const std::string body(png.begin(), png.end());
  const int attempts_allowed = options_.retries + 1;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts_allowed; ++attempt) {
    auto res = [&] {
      SemaphoreGuard guard(in_flight_);
      auto cli = make_client(options_);
      return cli.Post(options_.embed_path, body, "image/png");
    }();
    if (!res) {
      last_error = "embedding request to " + options_.endpoint + " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_error = "embedding request returned HTTP " + std::to_string(res->status);
      continue;
    }
    try {
      const auto j = nlohmann::json::parse(res->body);
      const std::size_t dim = read_dim(j);
      auto vit = j.find("values");
      if (vit == j.end() || !vit->is_array()) throw BadReply{"reply lacks a 'values' array"};
      std::vector<double> values;
      values.reserve(vit->size());
      for (const auto& v : *vit) {
        if (!v.is_number()) throw BadReply{"non-numeric entry in 'values'"};
        values.push_back(v.get<double>());
      }
      if (values.size() != dim) throw DimensionError(dim, values.size(), attempt);
      const std::size_t advertised = advertised_dim_.load();
      if (advertised != 0 && dim != advertised) throw DimensionError(advertised, dim, attempt);
      try {
        return EmbeddingVector(std::move(values));
      } catch (const ContractError& e) {
        throw BadReply{e.what()};
      }
    } catch (const nlohmann::json::exception& e) {
      throw TransportError(std::string("embedding reply is not JSON: ") + e.what(), attempt);
    } catch (const BadReply& e) {
      throw TransportError("embedding reply: " + e.what, attempt);
    }
  }
  throw TransportError(last_error, attempts_allowed);
}

EmbeddingVector remote_embed(const RasterImage& img, const RemoteBackendOptions& options) {
  RemoteBackend backend(options);
  backend.probe();
  return backend.embed(img);
}

}  // namespace docreward
