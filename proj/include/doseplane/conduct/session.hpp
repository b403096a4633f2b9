#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "doseplane/design/engine.hpp"

namespace doseplane::conduct {

/// Parameters a session is created from; together with the audit log they determine the state.
struct SessionSpec {
    model::DesignConfig config{};
    inference::McmcConfig mcmc = inference::McmcConfig::conduct();
    model::DoseWindow window{};
    std::uint64_t seed = 1;
};

nlohmann::json to_json(const SessionSpec& s);
/// Missing fields take defaults; errors carry field paths such as "config.theta_z".
SessionSpec session_spec_from_json(const nlohmann::json& j);

struct AuditEvent {
    std::string kind;  ///< "create", "outcomes", "efficacy" or "finalize"
    std::string timestamp;
    nlohmann::json payload;
};

/// A live trial plus its append-only audit log and optimistic-concurrency version.
class Session {
  public:
    static Session create(std::string id, const SessionSpec& spec);

    const std::string& id() const noexcept { return id_; }
    const SessionSpec& spec() const noexcept { return spec_; }
    const design::TrialState& state() const noexcept { return state_; }
    std::uint64_t version() const noexcept { return version_; }
    const std::vector<AuditEvent>& audit() const noexcept { return audit_; }

    /// Advances the pending cohort. The state is untouched when this throws.
    void submit_outcomes(const std::vector<design::CohortOutcome>& outcomes);
    /// Resolves efficacy outcomes that were pending at submission (index is 1-based).
    void resolve_efficacy(const std::vector<std::pair<int, model::Binary>>& updates);
    /// Final decision; logged. Throws StateError while the trial is active.
    design::FinalDecision finalize();

    /// {format_version, id, version, spec, state, audit}
    nlohmann::json to_json() const;
    static Session from_json(const nlohmann::json& j);

    /// Rebuilds the trial state from the spec and the logged events alone.
    static design::TrialState replay(const SessionSpec& spec, const std::vector<AuditEvent>& audit);

    /// Payload of GET /sessions/{id}/state.
    nlohmann::json view() const;

  private:
    void log(std::string kind, nlohmann::json payload);

    std::string id_;
    SessionSpec spec_{};
    design::TrialState state_{};
    std::uint64_t version_ = 0;
    std::vector<AuditEvent> audit_;
};

/// True for ids made of [A-Za-z0-9_-], 1 to 64 characters.
bool valid_session_id(const std::string& id);

/// One JSON file per session under a directory; writes are atomic.
class SessionStore {
  public:
    explicit SessionStore(std::filesystem::path dir);

    const std::filesystem::path& dir() const noexcept { return dir_; }
    std::filesystem::path path_of(const std::string& id) const;
    bool exists(const std::string& id) const;
    /// Throws std::out_of_range for an unknown id.
    Session load(const std::string& id) const;
    void save(const Session& s) const;
    /// Random 16-hex-digit id not yet in the store.
    std::string fresh_id() const;

    /// Mutex serializing mutations of one session within this process.
    std::mutex& lock_for(const std::string& id);

  private:
    std::filesystem::path dir_;
    std::mutex map_mu_;
    std::unordered_map<std::string, std::unique_ptr<std::mutex>> locks_;
};

/// Directory named by DOSEPLANE_STORE, else "./sessions".
std::filesystem::path default_store_dir();

}  // namespace doseplane::conduct
