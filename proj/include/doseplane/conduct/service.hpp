#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

#include "doseplane/conduct/session.hpp"

namespace doseplane::conduct {

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/// JSON conduct API over a session store.
///
///   POST /sessions                  {config?, mcmc?, window?, seed?, id?}
///   GET  /sessions/{id}/state
///   POST /sessions/{id}/outcomes    {version, outcomes: [{z, e}]}
///   POST /sessions/{id}/efficacy    {version, updates: [{index, e}]}
///   POST /sessions/{id}/finalize    {version?}
///
/// 200 on success, 404 unknown session, 409 stale version or wrong phase, 422 invalid body
/// (with the offending field path). Mutations of one session are serialized.
class ConductService {
  public:
    explicit ConductService(std::filesystem::path store_dir,
                            inference::McmcConfig default_mcmc = inference::McmcConfig::conduct());
    ~ConductService();
    ConductService(const ConductService&) = delete;
    ConductService& operator=(const ConductService&) = delete;

    /// Transport-independent request handling.
    ApiResponse handle(std::string_view method, std::string_view path, std::string_view body);

    /// Binds to host:port (port 0 picks a free port) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    bool serve();
    void stop();

    SessionStore& store() noexcept { return store_; }

  private:
    ApiResponse create(const nlohmann::json& body);
    ApiResponse get_state(const std::string& id);
    ApiResponse mutate(const std::string& id, const std::string& action, const nlohmann::json& body);

    SessionStore store_;
    inference::McmcConfig default_mcmc_;
    struct Http;
    std::unique_ptr<Http> http_;
};

}  // namespace doseplane::conduct
