#pragma once

#include <memory>
#include <string>
#include <thread>

#include "segsynth/backend.hpp"

namespace httplib {
class Server;
}

namespace segsynth {

/// Serves the HTTP protocol on top of any backend. Stateless per request.
class WireServer {
  public:
    explicit WireServer(GenerationBackend& backend);
    ~WireServer();
    WireServer(const WireServer&) = delete;
    WireServer& operator=(const WireServer&) = delete;

    /// Binds host:port (port 0 picks a free port) and returns the bound port.
    /// Throws TransportError when binding fails.
    int bind(const std::string& host, int port);
    /// Blocks until stop() is called.
    void listen();
    /// Runs listen() on a background thread; returns once the server accepts connections.
    void start_background();
    void stop();

  private:
    GenerationBackend& backend_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

}  // namespace segsynth
