#include "doseplane/conduct/session.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <random>
#include <stdexcept>

#include "doseplane/design/state_json.hpp"
#include "doseplane/errors.hpp"
#include "doseplane/util/atomic_file.hpp"
#include "doseplane/util/json_fields.hpp"

namespace doseplane::conduct {

using nlohmann::json;

namespace {

constexpr int kSessionFormatVersion = 1;

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json outcomes_json(const std::vector<design::CohortOutcome>& outcomes) {
    json out = json::array();
    for (const auto& o : outcomes) {
        out.push_back({{"z", model::as_int(o.z)}, {"e", model::resolved(o.e) ? json(model::as_int(o.e)) : json(nullptr)}});
    }
    return out;
}

std::vector<std::pair<int, model::Binary>> updates_from_json(const json& j, const std::string& path) {
    util::require_array(j, path);
    std::vector<std::pair<int, model::Binary>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto ip = util::index_path(path, i);
        const auto idx = util::as_integer(util::require_field(j[i], "index", ip), util::join_path(ip, "index"));
        const auto e = util::as_integer(util::require_field(j[i], "e", ip), util::join_path(ip, "e"));
        if (e != 0 && e != 1) throw InputError(util::join_path(ip, "e"), "outcome must be 0 or 1");
        out.emplace_back(static_cast<int>(idx), model::from_bool(e == 1));
    }
    return out;
}

void apply_event(design::TrialState& state, const AuditEvent& ev) {
    if (ev.kind == "outcomes") {
        const auto outcomes = design::outcomes_from_json(ev.payload.at("outcomes"), "outcomes");
        design::advance(state, outcomes);
    } else if (ev.kind == "efficacy") {
        const auto updates = updates_from_json(ev.payload.at("updates"), "updates");
        design::resolve_efficacy(state, updates);
    }
}

}  // namespace

json to_json(const SessionSpec& s) {
    return {{"config", design::to_json(s.config)},
            {"mcmc", design::to_json(s.mcmc)},
            {"window", design::to_json(s.window)},
            {"seed", std::to_string(s.seed)}};
}

SessionSpec session_spec_from_json(const json& j) {
    util::require_object(j, "");
    SessionSpec s;
    if (auto it = j.find("config"); it != j.end()) s.config = design::design_config_from_json(*it, "config");
    if (auto it = j.find("mcmc"); it != j.end()) s.mcmc = design::mcmc_config_from_json(*it, "mcmc");
    if (auto it = j.find("window"); it != j.end()) s.window = design::dose_window_from_json(*it, "window");
    if (auto it = j.find("seed"); it != j.end()) s.seed = util::as_uint64(*it, "seed");
    return s;
}

Session Session::create(std::string id, const SessionSpec& spec) {
    if (!valid_session_id(id)) throw InputError("id", "session ids use [A-Za-z0-9_-], 1 to 64 characters");
    Session s;
    s.id_ = std::move(id);
    s.spec_ = spec;
    s.state_ = design::start_trial(spec.config, spec.mcmc, spec.window, spec.seed);
    s.log("create", {{"spec", conduct::to_json(spec)}, {"pending", design::to_json(*s.state_.pending, spec.window)}});
    return s;
}

void Session::log(std::string kind, json payload) {
    audit_.push_back({std::move(kind), utc_now(), std::move(payload)});
    ++version_;
}

void Session::submit_outcomes(const std::vector<design::CohortOutcome>& outcomes) {
    auto next = state_;
    const auto assigned = state_.pending;
    design::advance(next, outcomes);
    state_ = std::move(next);
    json payload = {{"outcomes", outcomes_json(outcomes)}};
    if (assigned) payload["assignment"] = design::to_json(*assigned, spec_.window);
    payload["phase"] = design::to_string(state_.phase);
    log("outcomes", std::move(payload));
}

void Session::resolve_efficacy(const std::vector<std::pair<int, model::Binary>>& updates) {
    auto next = state_;
    design::resolve_efficacy(next, updates);
    state_ = std::move(next);
    json arr = json::array();
    for (const auto& [idx, e] : updates) arr.push_back({{"index", idx}, {"e", model::as_int(e)}});
    log("efficacy", {{"updates", std::move(arr)}});
}

design::FinalDecision Session::finalize() {
    auto d = design::decide(state_);
    log("finalize", {{"reject_h0", d.reject_h0}});
    return d;
}

json Session::to_json() const {
    json audit = json::array();
    for (const auto& e : audit_) audit.push_back({{"kind", e.kind}, {"timestamp", e.timestamp}, {"payload", e.payload}});
    return {{"format_version", kSessionFormatVersion},
            {"id", id_},
            {"version", version_},
            {"spec", conduct::to_json(spec_)},
            {"state", design::to_json(state_)},
            {"audit", std::move(audit)}};
}

Session Session::from_json(const json& j) {
    util::require_object(j, "");
    const auto v = util::as_integer(util::require_field(j, "format_version", ""), "format_version");
    if (v != kSessionFormatVersion) throw InputError("format_version", "unsupported session format");
    Session s;
    s.id_ = util::as_string(util::require_field(j, "id", ""), "id");
    s.version_ = util::as_uint64(util::require_field(j, "version", ""), "version");
    s.spec_ = session_spec_from_json(util::require_field(j, "spec", ""));
    s.state_ = design::state_from_json(util::require_field(j, "state", ""));
    const auto& audit = util::require_array(util::require_field(j, "audit", ""), "audit");
    for (std::size_t i = 0; i < audit.size(); ++i) {
        const auto ip = util::index_path("audit", i);
        AuditEvent e;
        e.kind = util::as_string(util::require_field(audit[i], "kind", ip), util::join_path(ip, "kind"));
        if (auto it = audit[i].find("timestamp"); it != audit[i].end() && it->is_string()) e.timestamp = *it;
        if (auto it = audit[i].find("payload"); it != audit[i].end()) e.payload = *it;
        s.audit_.push_back(std::move(e));
    }
    return s;
}

design::TrialState Session::replay(const SessionSpec& spec, const std::vector<AuditEvent>& audit) {
    auto state = design::start_trial(spec.config, spec.mcmc, spec.window, spec.seed);
    for (const auto& ev : audit) apply_event(state, ev);
    return state;
}

json Session::view() const {
    json v = design::to_json(state_);
    v["id"] = id_;
    v["version"] = std::to_string(version_);
    v["enrolled"] = state_.data.size();
    v["convergence"] = {{"max_split_rhat", std::max(state_.diagnostics.tox_max_rhat, state_.diagnostics.eff_max_rhat)},
                        {"chains", spec_.mcmc.chains}};
    if (state_.curve) {
        json raw = json::array();
        for (const auto& p : state_.curve->grid()) {
            const auto r = model::destandardize(p, spec_.window);
            raw.push_back({r.x, r.y});
        }
        v["curve"]["raw_grid"] = std::move(raw);
    }
    return v;
}

bool valid_session_id(const std::string& id) {
    if (id.empty() || id.size() > 64) return false;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!ok) return false;
    }
    return true;
}

SessionStore::SessionStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path SessionStore::path_of(const std::string& id) const {
    if (!valid_session_id(id)) throw std::out_of_range("invalid session id");
    return dir_ / (id + ".json");
}

bool SessionStore::exists(const std::string& id) const {
    return valid_session_id(id) && std::filesystem::exists(path_of(id));
}

Session SessionStore::load(const std::string& id) const {
    if (!exists(id)) throw std::out_of_range("unknown session " + id);
    return Session::from_json(json::parse(util::read_file(path_of(id))));
}

void SessionStore::save(const Session& s) const { util::write_file_atomic(path_of(s.id()), s.to_json().dump(1) + "\n"); }

std::string SessionStore::fresh_id() const {
    std::random_device rd;
    std::mt19937_64 gen((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
    for (;;) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(gen()));
        if (!exists(buf)) return buf;
    }
}

std::mutex& SessionStore::lock_for(const std::string& id) {
    std::lock_guard lock(map_mu_);
    auto& slot = locks_[id];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

std::filesystem::path default_store_dir() {
    if (const char* env = std::getenv("DOSEPLANE_STORE"); env != nullptr && *env != '\0') return env;
    return "sessions";
}

}  // namespace doseplane::conduct
