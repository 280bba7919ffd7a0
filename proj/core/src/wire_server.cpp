#include "segsynth/wire_server.hpp"

#include <httplib.h>

#include <chrono>

#include "segsynth/wire.hpp"

namespace segsynth {
namespace {

template <typename Handler>
httplib::Server::Handler json_endpoint(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
        const auto id = req.get_header_value(wire::kRequestIdHeader);
        if (!id.empty()) {
            res.set_header(wire::kRequestIdHeader, id);
        }
        try {
            res.set_content(handler(req), "application/json");
            res.status = 200;
        } catch (const ProtocolError& e) {
            res.status = 400;
            res.set_content(wire::encode_error(e.what()), "application/json");
        } catch (const TransportError& e) {
            res.status = 503;
            res.set_content(wire::encode_error(e.what()), "application/json");
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(wire::encode_error(e.what()), "application/json");
        }
    };
}

}  // namespace

WireServer::WireServer(GenerationBackend& backend) : backend_(backend), server_(std::make_unique<httplib::Server>()) {
    auto& b = backend_;
    server_->Get(wire::kHealthPath, json_endpoint([&b](const httplib::Request&) { return wire::encode(b.health()); }));
    server_->Post(wire::kImg2ImgPath, json_endpoint([&b](const httplib::Request& req) {
                      return wire::encode(b.img2img(wire::decode_img2img(req.body)));
                  }));
    server_->Post(wire::kInpaintPath, json_endpoint([&b](const httplib::Request& req) {
                      return wire::encode(b.inpaint(wire::decode_inpaint(req.body)));
                  }));
    server_->Post(wire::kCaptionPath, json_endpoint([&b](const httplib::Request& req) {
                      return wire::encode_caption_response(b.caption(wire::decode_caption(req.body)));
                  }));
    server_->Post(wire::kPriorPath, json_endpoint([&b](const httplib::Request& req) {
                      return wire::encode_prior_response(b.prior(wire::decode_prior(req.body)));
                  }));
}

WireServer::~WireServer() { stop(); }

int WireServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = server_->bind_to_any_port(host);
        if (bound < 0) {
            throw TransportError("cannot bind " + host + ":0");
        }
        return bound;
    }
    if (!server_->bind_to_port(host, port)) {
        throw TransportError("cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void WireServer::listen() { server_->listen_after_bind(); }

void WireServer::start_background() {
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

void WireServer::stop() {
    if (server_) {
        server_->stop();
    }
    if (thread_.joinable()) {
        thread_.join();
    }
}

}  // namespace segsynth
