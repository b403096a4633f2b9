#include "doseplane/conduct/service.hpp"

#include <httplib.h>

#include "doseplane/design/state_json.hpp"
#include "doseplane/errors.hpp"
#include "doseplane/util/json_fields.hpp"

namespace doseplane::conduct {

using nlohmann::json;

struct ConductService::Http {
    httplib::Server server;
};

namespace {

ApiResponse error(int status, const std::string& message, const std::string& field = {}) {
    json body = {{"error", message}};
    if (!field.empty()) body["field"] = field;
    return {status, std::move(body)};
}

ApiResponse input_error(const InputError& e) {
    const std::string what = e.what();
    const auto& f = e.field();
    return error(422, f.empty() ? what : what.substr(std::min(what.size(), f.size() + 2)), f);
}

/// Splits "/sessions/{id}/{action}" into (id, action); false for anything else.
bool split_session_path(std::string_view path, std::string& id, std::string& action) {
    constexpr std::string_view prefix = "/sessions/";
    if (path.substr(0, prefix.size()) != prefix) return false;
    path.remove_prefix(prefix.size());
    const auto slash = path.find('/');
    if (slash == std::string_view::npos) return false;
    id = std::string(path.substr(0, slash));
    action = std::string(path.substr(slash + 1));
    return !id.empty() && !action.empty() && action.find('/') == std::string::npos;
}

}  // namespace

ConductService::ConductService(std::filesystem::path store_dir, inference::McmcConfig default_mcmc)
    : store_(std::move(store_dir)), default_mcmc_(default_mcmc), http_(std::make_unique<Http>()) {
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
        const auto out = handle(req.method, req.path, req.body);
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    };
    auto& s = http_->server;
    s.Get(R"(/.*)", dispatch);
    s.Post(R"(/.*)", dispatch);
    s.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
}

ConductService::~ConductService() { stop(); }

ApiResponse ConductService::handle(std::string_view method, std::string_view path, std::string_view body_text) {
    json body = json::object();
    if (method == "POST" && !body_text.empty()) {
        try {
            body = json::parse(body_text);
        } catch (const json::parse_error&) {
            return error(422, "request body is not valid JSON");
        }
        if (!body.is_object()) return error(422, "request body must be a JSON object");
    }
    try {
        if (path == "/health" && method == "GET") return {200, {{"status", "ok"}}};
        if (path == "/sessions" && method == "POST") return create(body);
        std::string id, action;
        if (!split_session_path(path, id, action)) return error(404, "no such endpoint");
        if (!store_.exists(id)) return error(404, "unknown session " + id);
        if (action == "state" && method == "GET") return get_state(id);
        if ((action == "outcomes" || action == "efficacy" || action == "finalize") && method == "POST") {
            return mutate(id, action, body);
        }
        return error(404, "no such endpoint");
    } catch (const InputError& e) {
        return input_error(e);
    } catch (const StateError& e) {
        return error(409, e.what());
    } catch (const std::exception& e) {
        return error(500, e.what());
    }
}

ApiResponse ConductService::create(const json& body) {
    auto spec = session_spec_from_json(body);
    if (!body.contains("mcmc")) spec.mcmc = default_mcmc_;
    std::string id = body.contains("id") ? util::as_string(body["id"], "id") : store_.fresh_id();
    if (!valid_session_id(id)) return error(422, "session ids use [A-Za-z0-9_-], 1 to 64 characters", "id");
    std::lock_guard lock(store_.lock_for(id));
    if (store_.exists(id)) return error(409, "session " + id + " already exists", "id");
    auto s = Session::create(id, spec);
    store_.save(s);
    return {200, s.view()};
}

ApiResponse ConductService::get_state(const std::string& id) {
    std::lock_guard lock(store_.lock_for(id));
    return {200, store_.load(id).view()};
}

ApiResponse ConductService::mutate(const std::string& id, const std::string& action, const json& body) {
    std::lock_guard lock(store_.lock_for(id));
    auto s = store_.load(id);
    const auto it = body.find("version");
    if (it == body.end()) {
        if (action != "finalize") return error(422, "missing state version token", "version");
    } else if (util::as_uint64(*it, "version") != s.version()) {
        return error(409, "state version is " + std::to_string(s.version()) + "; reload and retry", "version");
    }

    if (action == "finalize") {
        const auto d = s.finalize();
        store_.save(s);
        auto out = design::to_json(d, s.spec().window);
        out["version"] = std::to_string(s.version());
        return {200, std::move(out)};
    }
    if (action == "outcomes") {
        if (!body.contains("outcomes")) return error(422, "missing required field", "outcomes");
        s.submit_outcomes(design::outcomes_from_json(body["outcomes"], "outcomes"));
    } else {
        if (!body.contains("updates")) return error(422, "missing required field", "updates");
        std::vector<std::pair<int, model::Binary>> updates;
        const auto& arr = util::require_array(body["updates"], "updates");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto ip = util::index_path("updates", i);
            const auto idx = util::as_integer(util::require_field(arr[i], "index", ip), util::join_path(ip, "index"));
            const auto e = util::as_integer(util::require_field(arr[i], "e", ip), util::join_path(ip, "e"));
            if (e != 0 && e != 1) throw InputError(util::join_path(ip, "e"), "outcome must be 0 or 1");
            updates.emplace_back(static_cast<int>(idx), model::from_bool(e == 1));
        }
        s.resolve_efficacy(updates);
    }
    store_.save(s);
    return {200, s.view()};
}

int ConductService::bind(const std::string& host, int port) {
    if (port == 0) return http_->server.bind_to_any_port(host);
    return http_->server.bind_to_port(host, port) ? port : -1;
}

bool ConductService::serve() { return http_->server.listen_after_bind(); }

void ConductService::stop() {
    if (http_) http_->server.stop();
}

}  // namespace doseplane::conduct
