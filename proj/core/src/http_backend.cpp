#include "segsynth/http_backend.hpp"

#include <httplib.h>

#include <thread>

#include "segsynth/wire.hpp"

namespace segsynth {
namespace {

class SlotGuard {
  public:
    explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
    ~SlotGuard() { s_.release(); }
    SlotGuard(const SlotGuard&) = delete;
    SlotGuard& operator=(const SlotGuard&) = delete;

  private:
    std::counting_semaphore<>& s_;
};

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpBackend::HttpBackend(const std::string& base_url, HttpBackendOptions options)
    : base_url_(base_url), options_(options), slots_(std::max(1, options.max_in_flight)) {
    if (base_url_.rfind("http://", 0) != 0 && base_url_.rfind("https://", 0) != 0) {
        throw ConfigError("backend URL must start with http:// or https://, got '" + base_url_ + "'");
    }
    while (!base_url_.empty() && base_url_.back() == '/') {
        base_url_.pop_back();
    }
    httplib::Client probe(base_url_);
    if (!probe.is_valid()) {
        throw ConfigError("unusable backend URL '" + base_url_ + "'");
    }
    if (options_.max_attempts < 1) {
        options_.max_attempts = 1;
    }
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::send(const char* method, const char* path, const std::string* body) {
    SlotGuard slot(slots_);
    const std::string request_id = std::to_string(next_request_id_.fetch_add(1));
    std::string last_error;
    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(options_.backoff_base * (1 << (attempt - 2)));
        }
        httplib::Client client(base_url_);
        client.set_connection_timeout(options_.connect_timeout);
        client.set_read_timeout(options_.read_timeout);
        client.set_write_timeout(options_.read_timeout);
        const httplib::Headers headers{{wire::kRequestIdHeader, request_id}};
        const httplib::Result res = body != nullptr ? client.Post(path, headers, *body, "application/json")
                                                    : client.Get(path, headers);
        if (!res) {
            last_error = "cannot reach " + base_url_ + path + ": " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) {
            const auto echoed = res->get_header_value(wire::kRequestIdHeader);
            if (!echoed.empty() && echoed != request_id) {
                throw ProtocolError(std::string(method) + " " + path + ": response correlates to request " + echoed +
                                    ", expected " + request_id);
            }
            return res->body;
        }
        const std::string message = wire::decode_error(res->body);
        if (!retryable_status(res->status)) {
            throw ProtocolError(std::string(method) + " " + path + " rejected (" + std::to_string(res->status) +
                                "): " + message);
        }
        last_error = std::string(method) + " " + path + " failed (" + std::to_string(res->status) + "): " + message;
    }
    throw TransportError(last_error + " (after " + std::to_string(options_.max_attempts) + " attempts)");
}

std::string HttpBackend::post(const char* path, const std::string& body) { return send("POST", path, &body); }

std::string HttpBackend::get(const char* path) { return send("GET", path, nullptr); }

Health HttpBackend::health() { return wire::decode_health(get(wire::kHealthPath)); }

GenResponse HttpBackend::img2img(const Img2ImgRequest& request) {
    request.validate();
    GenResponse response = wire::decode_gen_response(post(wire::kImg2ImgPath, wire::encode(request)));
    if (response.image.size() != request.output) {
        throw ProtocolError("img2img returned " + to_string(response.image.size()) + ", requested " +
                            to_string(request.output));
    }
    return response;
}

GenResponse HttpBackend::inpaint(const InpaintRequest& request) {
    request.validate();
    GenResponse response = wire::decode_gen_response(post(wire::kInpaintPath, wire::encode(request)));
    if (response.image.size() != request.base.output) {
        throw ProtocolError("inpaint returned " + to_string(response.image.size()) + ", requested " +
                            to_string(request.base.output));
    }
    return response;
}

std::string HttpBackend::caption(const CaptionRequest& request) {
    return wire::decode_caption_response(post(wire::kCaptionPath, wire::encode(request)));
}

VisualPrior HttpBackend::prior(const PriorRequest& request) {
    VisualPrior prior = wire::decode_prior_response(post(wire::kPriorPath, wire::encode(request)));
    if (prior.size() != request.image.size()) {
        throw ProtocolError("prior returned " + to_string(prior.size()) + ", expected " +
                            to_string(request.image.size()));
    }
    return prior;
}

}  // namespace segsynth
