#include "nvsyn/service.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "nvsyn/error.hpp"
#include "nvsyn/serialization.hpp"
#include "nvsyn/text.hpp"

namespace nvsyn {

namespace fs = std::filesystem;

QueryParams parse_query(const std::string& query) {
    httplib::Params p;
    httplib::detail::parse_query_text(query, p);
    return p;
}

namespace {

HttpResponse json_response(int status, const Json& j) {
    HttpResponse r;
    r.status = status;
    r.body = j.dump();
    return r;
}

HttpResponse error_response(const Error& e) {
    auto api = to_api_error(e);
    return json_response(api.http_status, to_json(api));
}

HttpResponse plain_error(int status, const std::string& code, const std::string& msg) {
    return json_response(status, to_json(ApiError{status, code, msg}));
}

std::vector<std::string> segments(const std::string& path) {
    std::vector<std::string> out;
    for (auto& s : split(path, '/'))
        if (!s.empty()) out.push_back(httplib::detail::decode_url(s, false));
    return out;
}

std::optional<std::string> param(const QueryParams& q, const std::string& key) {
    auto it = q.find(key);
    if (it == q.end()) return std::nullopt;
    return it->second;
}

std::size_t count_param(const QueryParams& q, const std::string& key, std::size_t fallback) {
    auto v = param(q, key);
    if (!v || v->empty()) return fallback;
    try {
        std::size_t used = 0;
        long long n = std::stoll(*v, &used);
        if (used != v->size() || n < 0) throw std::invalid_argument("");
        return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedRequest, "query parameter '" + key + "' must be a non-negative integer");
    }
}

Json cue_summary(const CueVocabularyEntry& e) {
    auto j = to_json(e);
    j["state_count"] = e.associated_states.size();
    return j;
}

}  // namespace

Service::Service(Framework fw, ServiceOptions opt) : fw_(std::move(fw)), opt_(std::move(opt)) {
    hash_ = nvsyn::framework_hash(export_framework(fw_));
    std::random_device rd;
    id_salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    if (!opt_.session_dir.empty()) {
        std::error_code ec;
        fs::create_directories(opt_.session_dir, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create session directory " + opt_.session_dir);
        load_sessions();
    }
}

std::size_t Service::session_count() const {
    std::lock_guard lk(sessions_mu_);
    return sessions_.size();
}

std::string Service::new_session_id() const {
    std::lock_guard lk(sessions_mu_);
    for (;;) {
        std::ostringstream id;
        id << "s" << std::hex << ((id_salt_ + ++id_counter_ * 0x9e3779b97f4a7c15ULL) & 0xffffffffffffULL);
        if (!sessions_.count(id.str())) return id.str();
    }
}

void Service::persist(const DiagnosticSession& s) const {
    if (opt_.session_dir.empty()) return;
    auto path = fs::path(opt_.session_dir) / (s.session_id + ".json");
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error(ErrorCode::IoError, "cannot write session snapshot " + tmp.string());
        out << session_record(s).dump();
        if (!out) throw Error(ErrorCode::IoError, "cannot write session snapshot " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot move session snapshot into place: " + ec.message());
}

void Service::load_sessions() {
    for (auto& entry : fs::directory_iterator(opt_.session_dir)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        Json j;
        try {
            j = Json::parse(ss.str());
        } catch (const Json::parse_error&) {
            throw Error(ErrorCode::ParseError, "corrupt session snapshot " + entry.path().string());
        }
        auto slot = std::make_shared<Slot>();
        slot->session = session_from_record(j, fw_);
        sessions_[slot->session.session_id] = slot;
    }
}

std::shared_ptr<Service::Slot> Service::find_slot(const std::string& id) const {
    std::lock_guard lk(sessions_mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "unknown session '" + id + "'");
    return it->second;
}

HttpResponse Service::create_session(const std::string& body) const {
    auto j = parse_request_json(body);
    if (!j.is_object()) throw Error(ErrorCode::MalformedRequest, "session body must be a JSON object");
    auto opt = options_from_json(j.value("options", Json(nullptr)));
    auto slot = std::make_shared<Slot>();
    std::string id = new_session_id();
    slot->session = new_session(id, fw_, opt);
    // an opening observation may ride along with the create call
    if (!j.value("observed", Json::array()).empty() || !j.value("absent", Json::array()).empty())
        session_update(slot->session, delta_from_json(j), fw_);
    persist(slot->session);
    {
        std::lock_guard lk(sessions_mu_);
        sessions_[id] = slot;
    }
    auto out = to_json(slot->session);
    return json_response(201, out);
}

HttpResponse Service::update_session(const std::string& id, const std::string& body) const {
    auto slot = find_slot(id);
    auto delta = delta_from_json(parse_request_json(body));
    std::lock_guard lk(slot->mu);
    auto before = slot->session;
    session_update(slot->session, delta, fw_);
    try {
        persist(slot->session);
    } catch (...) {
        slot->session = std::move(before);
        throw;
    }
    Json out = {{"session_id", id}, {"step", slot->session.history.size() - 1}, {"result", to_json(slot->session.history.back())}};
    return json_response(200, out);
}

HttpResponse Service::get_session(const std::string& id) const {
    auto slot = find_slot(id);
    std::lock_guard lk(slot->mu);
    return json_response(200, to_json(slot->session));
}

HttpResponse Service::delete_session(const std::string& id) const {
    {
        std::lock_guard lk(sessions_mu_);
        if (!sessions_.erase(id)) throw Error(ErrorCode::UnknownSession, "unknown session '" + id + "'");
    }
    if (!opt_.session_dir.empty()) {
        std::error_code ec;
        fs::remove(fs::path(opt_.session_dir) / (id + ".json"), ec);
    }
    return json_response(200, {{"deleted", id}});
}

HttpResponse Service::powerlaw(const QueryParams& q) const {
    auto replicates = count_param(q, "replicates", opt_.default_replicates);
    auto seed = static_cast<std::uint64_t>(count_param(q, "seed", opt_.default_seed));
    std::vector<Alternative> alts{Alternative::Exponential, Alternative::Lognormal, Alternative::StretchedExponential};
    if (auto a = param(q, "alternatives"); a && !a->empty()) {
        alts.clear();
        for (auto& name : split_list(*a, ',')) alts.push_back(parse_alternative(name));
    }
    std::string key = std::to_string(replicates) + "/" + std::to_string(seed) + "/";
    for (auto a : alts) key += alternative_name(a) + std::string(",");
    {
        std::lock_guard lk(cache_mu_);
        if (auto it = powerlaw_cache_.find(key); it != powerlaw_cache_.end()) {
            HttpResponse r;
            r.body = it->second;
            return r;
        }
    }
    auto sample = relationship_count_distribution(fw_.index);
    auto fit = select_xmin(sample);
    Json out = {{"sample", "relationship_paper_counts"}, {"fit", to_json(fit)}};
    if (replicates > 0) out["goodness_of_fit"] = to_json(bootstrap_gof(sample, fit, replicates, seed, opt_.bootstrap_threads));
    else out["goodness_of_fit"] = nullptr;
    Json comps = Json::array();
    for (auto a : alts) {
        try {
            comps.push_back(to_json(likelihood_ratio_test(sample, fit, a)));
        } catch (const Error& e) {
            comps.push_back({{"model_a", "power_law"}, {"model_b", alternative_name(a)}, {"error", to_json(to_api_error(e))}});
        }
    }
    out["comparisons"] = comps;
    out["plot"] = to_json(plot_data(sample, fit));
    auto body = out.dump();
    {
        std::lock_guard lk(cache_mu_);
        powerlaw_cache_[key] = body;
    }
    HttpResponse r;
    r.body = std::move(body);
    return r;
}

HttpResponse Service::route(const std::string& method, const std::string& path, const QueryParams& q,
                            const std::string& body) const {
    auto seg = segments(path);
    auto not_found = [&] { return plain_error(404, "NotFound", "no route for " + method + " " + path); };
    auto bad_method = [&] { return plain_error(405, "MethodNotAllowed", method + " is not allowed on " + path); };
    if (seg.size() < 2 || seg[0] != "v1") return not_found();
    const auto& res = seg[1];
    bool get = method == "GET", post = method == "POST";

    if (res == "health" && seg.size() == 2) {
        if (!get) return bad_method();
        return json_response(200, {{"status", "ok"},
                                   {"framework_hash", hash_},
                                   {"schema_version", Framework::kSchemaVersion},
                                   {"states", fw_.index.states.size()},
                                   {"cues", fw_.index.cues.size()},
                                   {"relationships", fw_.index.relationships.size()}});
    }
    if (res == "framework" && seg.size() == 2) {
        if (!get) return bad_method();
        HttpResponse r;
        r.body = export_framework(fw_);
        return r;
    }
    if (res == "states") {
        if (!get) return bad_method();
        if (seg.size() == 2) {
            Json a = Json::array();
            for (auto& c : fw_.clusters) {
                auto j = to_json(c);
                j.erase("top_cues");
                a.push_back(j);
            }
            return json_response(200, {{"states", a}});
        }
        if (seg.size() == 3) {
            auto name = fw_.resolve_state(seg[2]);
            return json_response(200, {{"state", name}, {"cluster", to_json(*fw_.cluster(name))}, {"profile", to_json(*fw_.profile(name))}});
        }
        return not_found();
    }
    if (res == "cues") {
        if (!get) return bad_method();
        if (seg.size() == 3) return json_response(200, to_json(*fw_.cue(fw_.resolve_cue(seg[2]))));
        if (seg.size() != 2) return not_found();
        std::optional<Channel> channel;
        std::optional<ComponentTier> min_tier;
        std::optional<Specificity> spec;
        std::optional<ActionabilityLevel> act;
        std::optional<ObservabilityMode> obs;
        std::optional<std::string> state, text;
        if (auto v = param(q, "channel"); v && !v->empty()) {
            channel = parse_channel(*v);
            if (!channel) throw Error(ErrorCode::MalformedRequest, "unknown channel '" + *v + "'");
        }
        if (auto v = param(q, "min_tier"); v && !v->empty()) {
            min_tier = parse_component_tier(*v);
            if (!min_tier) throw Error(ErrorCode::MalformedRequest, "min_tier must be T1..T5");
        }
        if (auto v = param(q, "specificity"); v && !v->empty()) {
            spec = parse_specificity(*v);
            if (!spec) throw Error(ErrorCode::MalformedRequest, "specificity must be Specific or General");
        }
        if (auto v = param(q, "actionability"); v && !v->empty()) {
            act = parse_actionability(*v);
            if (!act) throw Error(ErrorCode::MalformedRequest, "unknown actionability level '" + *v + "'");
        }
        if (auto v = param(q, "observability"); v && !v->empty()) {
            obs = parse_observability(*v);
            if (!obs) throw Error(ErrorCode::MalformedRequest, "observability must be Observable, Instrumental or Mixed");
        }
        if (auto v = param(q, "state"); v && !v->empty()) state = fw_.resolve_state(*v);
        if (auto v = param(q, "q"); v && !v->empty()) text = fold_label(*v);
        auto limit = count_param(q, "limit", 100);
        auto offset = count_param(q, "offset", 0);
        std::vector<const CueVocabularyEntry*> hits;
        for (auto& e : fw_.vocabulary) {
            if (channel && e.channel != *channel) continue;
            if (min_tier && e.component_tier > *min_tier) continue;
            if (spec && e.specificity != *spec) continue;
            if (act && e.actionability != *act) continue;
            if (obs && e.observability != *obs) continue;
            if (text && fold_label(e.cue).find(*text) == std::string::npos) continue;
            if (state && std::none_of(e.associated_states.begin(), e.associated_states.end(),
                                      [&](const StateLink& l) { return l.state == *state; }))
                continue;
            hits.push_back(&e);
        }
        // ranked by papers so the heaviest cues come first
        std::stable_sort(hits.begin(), hits.end(), [](auto* a, auto* b) {
            return rank_before(a->paper_count, a->cue, b->paper_count, b->cue);
        });
        Json a = Json::array();
        for (std::size_t i = offset; i < hits.size() && i < offset + limit; ++i) a.push_back(cue_summary(*hits[i]));
        return json_response(200, {{"total", hits.size()}, {"offset", offset}, {"limit", limit}, {"cues", a}});
    }
    if (res == "pairs" && seg.size() == 2) {
        if (!get) return bad_method();
        auto a = param(q, "a"), b = param(q, "b");
        if (a || b) {
            if (!a || !b || a->empty() || b->empty())
                throw Error(ErrorCode::MalformedRequest, "pair lookup needs both a and b");
            auto sa = fw_.resolve_state(*a), sb = fw_.resolve_state(*b);
            auto pr = make_pair_report(fw_.index, sa, sb);
            auto j = to_json(pr);
            j["discriminators"] = to_json(discriminative_cues(pr, fw_.index));
            return json_response(200, j);
        }
        Json arr = Json::array();
        for (auto& p : fw_.pairs)
            arr.push_back({{"state_a", p.state_a}, {"state_b", p.state_b}, {"shared", p.shared_cues.size()}, {"jaccard", p.jaccard}});
        return json_response(200, {{"min_shared", fw_.config.min_shared}, {"pairs", arr}});
    }
    if (res == "cross-tab" && seg.size() == 2) {
        if (!get) return bad_method();
        return json_response(200, to_json(cross_tab_confidence_vs_replication(fw_.index)));
    }
    if (res == "core" && seg.size() == 2) {
        if (!get) return bad_method();
        auto j = to_json(actionable_core(fw_.index));
        j["tier_distribution"] = to_json(tier_distribution(fw_.index));
        return json_response(200, j);
    }
    if (res == "normalization" && seg.size() == 2) {
        if (!get) return bad_method();
        return json_response(200, to_json(fw_.normalization));
    }
    if (res == "powerlaw" && seg.size() == 2) {
        if (!get) return bad_method();
        return powerlaw(q);
    }
    if (res == "infer" && seg.size() == 2) {
        if (!post) return bad_method();
        auto j = parse_request_json(body);
        auto delta = delta_from_json(j);
        auto opt = options_from_json(j.value("options", Json(nullptr)));
        auto obs = normalize_observation(delta.observed, delta.absent, fw_.dictionary);
        obs.timestamp = delta.timestamp;
        return json_response(200, to_json(run_inference(obs, fw_, opt)));
    }
    if (res == "sessions") {
        if (seg.size() == 2) {
            if (post) return create_session(body);
            if (get) {
                std::lock_guard lk(sessions_mu_);
                Json ids = Json::array();
                for (auto& [id, s] : sessions_) ids.push_back(id);
                return json_response(200, {{"sessions", ids}});
            }
            return bad_method();
        }
        if (seg.size() == 3) {
            if (get) return get_session(seg[2]);
            if (method == "DELETE") return delete_session(seg[2]);
            return bad_method();
        }
        if (seg.size() == 4 && seg[3] == "observations") {
            if (!post) return bad_method();
            return update_session(seg[2], body);
        }
        return not_found();
    }
    return not_found();
}

HttpResponse Service::handle(const std::string& method, const std::string& path, const QueryParams& query,
                             const std::string& body) const {
    HttpResponse r;
    try {
        r = route(method, path, query, body);
    } catch (const Error& e) {
        r = error_response(e);
    } catch (const std::exception& e) {
        r = plain_error(500, "Internal", e.what());
    }
    r.headers["X-Framework-Hash"] = hash_;
    return r;
}

HttpResponse Service::handle(const std::string& method, const std::string& target, const std::string& body) const {
    auto q = target.find('?');
    if (q == std::string::npos) return handle(method, target, QueryParams{}, body);
    return handle(method, target.substr(0, q), parse_query(target.substr(q + 1)), body);
}

bool Service::serve(const std::string& host, int port, std::function<void(int)> on_ready) {
    httplib::Server srv;
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
        auto r = handle(req.method, req.path, req.params, req.body);
        res.status = r.status;
        for (auto& [k, v] : r.headers) res.set_header(k, v);
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Expose-Headers", "X-Framework-Hash");
        res.set_content(r.body, r.content_type);
    };
    const char* any = R"(/.*)";
    srv.Get(any, dispatch);
    srv.Post(any, dispatch);
    srv.Delete(any, dispatch);
    srv.Options(any, [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    int bound = port;
    if (port == 0) bound = srv.bind_to_any_port(host);
    else if (!srv.bind_to_port(host, port)) bound = -1;
    if (bound < 0) return false;
    server_ = &srv;
    std::thread notifier;
    if (on_ready)
        notifier = std::thread([&srv, bound, on_ready] {
            srv.wait_until_ready();
            on_ready(bound);
        });
    bool ok = srv.listen_after_bind();
    server_ = nullptr;
    if (notifier.joinable()) notifier.join();
    return ok;
}

void Service::stop() {
    if (auto* s = server_.load()) static_cast<httplib::Server*>(s)->stop();
}

}  // namespace nvsyn
