#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <semaphore>
#include <string>

#include "segsynth/backend.hpp"

namespace segsynth {

struct HttpBackendOptions {
    int max_attempts = 4;  // first try plus 3 retries
    std::chrono::milliseconds backoff_base{500};
    std::chrono::seconds connect_timeout{5};
    std::chrono::seconds read_timeout{600};
    int max_in_flight = 2;
};

/// Client for the worker's HTTP protocol. Transport failures (no connection, timeouts, 5xx, 429)
/// are retried with exponential backoff; 4xx answers surface as ProtocolError immediately.
/// At most `max_in_flight` requests are outstanding; each carries a correlation id that the
/// server must echo.
class HttpBackend final : public GenerationBackend {
  public:
    /// base_url like "http://127.0.0.1:8080". Throws ConfigError on an unparseable URL.
    explicit HttpBackend(const std::string& base_url, HttpBackendOptions options = {});
    ~HttpBackend() override;

    Health health() override;
    GenResponse img2img(const Img2ImgRequest& request) override;
    GenResponse inpaint(const InpaintRequest& request) override;
    std::string caption(const CaptionRequest& request) override;
    VisualPrior prior(const PriorRequest& request) override;

    [[nodiscard]] std::string name() const override { return base_url_; }

  private:
    std::string post(const char* path, const std::string& body);
    std::string get(const char* path);
    std::string send(const char* method, const char* path, const std::string* body);

    std::string base_url_;
    HttpBackendOptions options_;
    std::counting_semaphore<> slots_;
    std::atomic<std::uint64_t> next_request_id_{1};
};

}  // namespace segsynth
