#include "nvsyn/serialization.hpp"

#include "nvsyn/text.hpp"

namespace nvsyn {

namespace {

Json ranked_list(const std::vector<RankedCue>& v) {
    Json a = Json::array();
    for (auto& c : v) a.push_back(to_json(c));
    return a;
}

template <class T>
Json list(const std::vector<T>& v) {
    Json a = Json::array();
    for (auto& x : v) a.push_back(to_json(x));
    return a;
}

[[noreturn]] void bad_doc(const std::string& msg) { throw Error(ErrorCode::ParseError, "framework document: " + msg); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) bad_doc(std::string("expected an object around '") + key + "'");
    auto it = j.find(key);
    if (it == j.end()) bad_doc(std::string("missing '") + key + "'");
    return *it;
}

std::size_t get_count(const Json& j, const char* key) {
    auto& v = field(j, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        bad_doc(std::string("'") + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

double get_double(const Json& j, const char* key) {
    auto& v = field(j, key);
    if (!v.is_number()) bad_doc(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

std::string get_string(const Json& j, const char* key) {
    auto& v = field(j, key);
    if (!v.is_string()) bad_doc(std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

Channel get_channel(const Json& j, const char* key) {
    auto c = parse_channel_strict(get_string(j, key));
    if (!c) bad_doc(std::string("'") + key + "' is not a channel");
    return *c;
}

template <std::size_t N>
std::array<std::size_t, N> get_bounds(const Json& j, const char* key) {
    auto& v = field(j, key);
    if (!v.is_array() || v.size() != N) bad_doc(std::string("'") + key + "' must have " + std::to_string(N) + " bounds");
    std::array<std::size_t, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        if (!v[i].is_number_unsigned()) bad_doc(std::string("'") + key + "' bounds must be non-negative integers");
        out[i] = v[i].get<std::size_t>();
        if (out[i] < 1 || (i > 0 && out[i] >= out[i - 1])) bad_doc(std::string("'") + key + "' bounds must be strictly decreasing and >= 1");
    }
    return out;
}

[[noreturn]] void bad_request(const std::string& msg) { throw Error(ErrorCode::MalformedRequest, msg); }

std::vector<std::string> string_list(const Json& j, const char* key) {
    std::vector<std::string> out;
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return out;
    if (!it->is_array()) bad_request(std::string("'") + key + "' must be an array of strings");
    for (auto& v : *it) {
        if (!v.is_string()) bad_request(std::string("'") + key + "' must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::size_t request_count(const Json& j, const char* key, std::size_t fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    if (!it->is_number_unsigned()) bad_request(std::string("'") + key + "' must be a non-negative integer");
    return it->get<std::size_t>();
}

}  // namespace

Json to_json(const RankedCue& c) {
    return {{"cue", c.cue}, {"count", c.count}, {"tier", tier_code(c.tier)}, {"channel", channel_name(c.channel)}};
}

Json to_json(const StateLink& l) { return {{"state", l.state}, {"count", l.count}, {"tier", tier_code(l.tier)}}; }

Json to_json(const CueVocabularyEntry& e) {
    return {{"cue", e.cue},
            {"channel", channel_name(e.channel)},
            {"observability", observability_name(e.observability)},
            {"component_tier", tier_code(e.component_tier)},
            {"paper_count", e.paper_count},
            {"specificity", specificity_name(e.specificity)},
            {"actionability", actionability_name(e.actionability)},
            {"associated_states", list(e.associated_states)}};
}

Json to_json(const StateCluster& c) {
    Json br = Json::object();
    for (auto& [ch, n] : c.channel_breakdown) br[channel_name(ch)] = n;
    return {{"state", c.state},
            {"component_tier", tier_code(c.component_tier)},
            {"paper_count", c.paper_count},
            {"total_cue_relationships", c.total_cue_relationships},
            {"channel_breakdown", br},
            {"top_cues", ranked_list(c.top_cues)},
            {"actionable_relationships", c.actionable_relationships}};
}

Json to_json(const StateProfile& p) {
    Json sig = Json::object();
    for (auto& [ch, v] : p.signature) sig[channel_name(ch)] = ranked_list(v);
    return {{"state", p.state},
            {"definition_text", p.definition_text},
            {"signature", sig},
            {"actionable_indicators", p.actionable_indicators},
            {"verbal_indicators", ranked_list(p.verbal_indicators)}};
}

Json to_json(const ConfusablePair& p) {
    return {{"state_a", p.state_a},
            {"state_b", p.state_b},
            {"shared_cues", p.shared_cues},
            {"shared", p.shared_cues.size()},
            {"specific_a", ranked_list(p.specific_a)},
            {"specific_b", ranked_list(p.specific_b)},
            {"jaccard", p.jaccard}};
}

Json to_json(const Discriminators& d) {
    return {{"specific_a", ranked_list(d.specific_a)}, {"specific_b", ranked_list(d.specific_b)}};
}

Json to_json(const RowIssue& i) { return {{"row", i.row}, {"kind", i.kind}, {"message", i.message}}; }

Json to_json(const ReductionReport& r) {
    return {{"input_rows", r.input_rows},
            {"emitted_rows", r.emitted_rows},
            {"raw_state_count", r.raw_state_count},
            {"canonical_state_count", r.canonical_state_count},
            {"state_reduction_pct", r.state_reduction_pct},
            {"raw_cue_count", r.raw_cue_count},
            {"canonical_cue_count", r.canonical_cue_count},
            {"cue_reduction_pct", r.cue_reduction_pct},
            {"largest_consolidation", {{"label", r.largest_consolidation.first}, {"merged", r.largest_consolidation.second}}},
            {"largest_cue_consolidation",
             {{"label", r.largest_cue_consolidation.first}, {"merged", r.largest_cue_consolidation.second}}},
            {"excluded_count", r.excluded_count},
            {"unresolved_channel_count", r.unresolved_channel_count},
            {"issues", list(r.issues)}};
}

ReductionReport report_from_json(const Json& j) {
    ReductionReport r;
    r.input_rows = get_count(j, "input_rows");
    r.emitted_rows = get_count(j, "emitted_rows");
    r.raw_state_count = get_count(j, "raw_state_count");
    r.canonical_state_count = get_count(j, "canonical_state_count");
    r.state_reduction_pct = get_double(j, "state_reduction_pct");
    r.raw_cue_count = get_count(j, "raw_cue_count");
    r.canonical_cue_count = get_count(j, "canonical_cue_count");
    r.cue_reduction_pct = get_double(j, "cue_reduction_pct");
    auto& lc = field(j, "largest_consolidation");
    r.largest_consolidation = {get_string(lc, "label"), get_count(lc, "merged")};
    auto& lcc = field(j, "largest_cue_consolidation");
    r.largest_cue_consolidation = {get_string(lcc, "label"), get_count(lcc, "merged")};
    r.excluded_count = get_count(j, "excluded_count");
    r.unresolved_channel_count = get_count(j, "unresolved_channel_count");
    auto& issues = field(j, "issues");
    if (!issues.is_array()) bad_doc("'issues' must be an array");
    for (auto& i : issues) r.issues.push_back({get_count(i, "row"), get_string(i, "kind"), get_string(i, "message")});
    return r;
}

Json to_json(const ValidationReport& r) {
    auto issues = [](const std::vector<ValidationIssue>& v) {
        Json a = Json::array();
        for (auto& i : v) {
            Json o = {{"row", i.row}, {"kind", i.kind}, {"message", i.message}};
            if (!i.suggestion.empty()) o["suggestion"] = i.suggestion;
            a.push_back(o);
        }
        return a;
    };
    return {{"well_formed", r.well_formed()}, {"errors", issues(r.errors)}, {"warnings", issues(r.warnings)}};
}

Json to_json(const CorpusStats& s) {
    Json h = Json::object();
    for (auto& [y, n] : s.year_histogram) h[std::to_string(y)] = n;
    return {{"distinct_papers", s.distinct_papers},
            {"mappings", s.mappings},
            {"year_histogram", h},
            {"papers_without_year", s.papers_without_year}};
}

Json to_json(const CrossTab& t) {
    Json rows = Json::array();
    for (auto& r : t.rows)
        rows.push_back({{"level", confidence_name(r.level)},
                        {"total", r.total},
                        {"single_paper", r.single_paper},
                        {"pct_single", r.pct_single}});
    return {{"rows", rows}, {"total_relationships", t.total_relationships}};
}

Json to_json(const ActionableCoreReport& r) {
    Json rels = Json::array();
    for (auto& c : r.relationships)
        rels.push_back({{"state", c.state}, {"cue", c.cue}, {"papers", c.papers}, {"tier", tier_code(c.tier)}});
    return {{"relationships", rels},
            {"size", r.relationships.size()},
            {"pair_fraction", r.pair_fraction},
            {"mapping_coverage", r.mapping_coverage},
            {"states", r.states},
            {"cues", r.cues},
            {"channels", r.channels}};
}

Json to_json(const TierDistribution& d) {
    Json s = Json::object(), c = Json::object(), r = Json::object();
    for (auto& [t, n] : d.states) s[tier_code(t)] = n;
    for (auto& [t, n] : d.cues) c[tier_code(t)] = n;
    for (auto& [t, n] : d.relationships) r[tier_code(t)] = n;
    return {{"states", s}, {"cues", c}, {"relationships", r}};
}

Json to_json(const TierThresholds& t) {
    return {{"state", t.state}, {"cue", t.cue}, {"relationship", t.relationship}};
}

Json to_json(const EvidenceIndex& idx) {
    Json states = Json::array(), cues = Json::array(), rels = Json::array();
    for (auto& [name, s] : idx.states) states.push_back({{"state", name}, {"papers", s.papers}, {"tier", tier_code(s.tier)}});
    for (auto& [name, c] : idx.cues)
        cues.push_back({{"cue", name},
                        {"papers", c.papers},
                        {"tier", tier_code(c.tier)},
                        {"channel", channel_name(c.channel)},
                        {"specificity", specificity_name(c.specificity)},
                        {"actionability", actionability_name(c.actionability)}});
    for (auto& [k, r] : idx.relationships)
        rels.push_back({{"state", k.first},
                        {"cue", k.second},
                        {"papers", r.papers},
                        {"mappings", r.mappings},
                        {"tier", tier_code(r.tier)},
                        {"combined", confidence_name(r.combined)}});
    return {{"thresholds", to_json(idx.thresholds)},
            {"total_mappings", idx.total_mappings},
            {"states", states},
            {"cues", cues},
            {"relationships", rels}};
}

EvidenceIndex index_from_json(const Json& j, const NormalizationDictionary& d) {
    EvidenceIndex idx;
    auto& th = field(j, "thresholds");
    idx.thresholds.state = get_bounds<4>(th, "state");
    idx.thresholds.cue = get_bounds<4>(th, "cue");
    idx.thresholds.relationship = get_bounds<5>(th, "relationship");
    idx.total_mappings = get_count(j, "total_mappings");
    for (auto& s : field(j, "states")) {
        auto name = get_string(s, "state");
        idx.states[name].papers = get_count(s, "papers");
        if (idx.states[name].papers < 1) bad_doc("state '" + name + "' has no papers");
    }
    for (auto& c : field(j, "cues")) {
        auto name = get_string(c, "cue");
        auto& e = idx.cues[name];
        e.papers = get_count(c, "papers");
        if (e.papers < 1) bad_doc("cue '" + name + "' has no papers");
        e.channel = get_channel(c, "channel");
        auto sp = parse_specificity(get_string(c, "specificity"));
        if (!sp) bad_doc("cue '" + name + "' has a bad specificity");
        e.specificity = *sp;
    }
    for (auto& r : field(j, "relationships")) {
        RelKey k{get_string(r, "state"), get_string(r, "cue")};
        auto& e = idx.relationships[k];
        e.papers = get_count(r, "papers");
        e.mappings = get_count(r, "mappings");
        if (e.papers < 1 || e.mappings < e.papers) bad_doc("relationship (" + k.first + ", " + k.second + ") has bad counts");
    }
    idx.rederive(d);
    return idx;
}

Json to_json(const FrameworkConfig& c) {
    return {{"min_shared", c.min_shared}, {"profile", {{"top_k", c.profile.top_k}, {"min_tier", tier_code(c.profile.min_tier)}}}};
}

Json to_json(const NormalizedMapping& m) {
    Json j = {{"paper_id", m.raw.paper_id},
              {"raw_state", m.raw.raw_state},
              {"raw_cue", m.raw.raw_cue},
              {"canonical_state", m.canonical_state},
              {"canonical_cue", m.canonical_cue},
              {"cue_specificity", specificity_name(m.cue_specificity)},
              {"channel", channel_name(m.channel)},
              {"normalization_trace", m.normalization_trace}};
    j["year"] = m.raw.year ? Json(*m.raw.year) : Json(nullptr);
    if (!m.raw.context.empty()) j["context"] = m.raw.context;
    return j;
}

Json to_json(const MatchedCue& m) { return {{"cue", m.cue}, {"count", m.count}, {"tier", tier_code(m.tier)}}; }

Json to_json(const CandidateState& c) {
    return {{"state", c.state},
            {"score", c.score},
            {"coverage", c.coverage},
            {"best_tier", tier_code(c.best_tier)},
            {"confidence_label", confidence_label_name(c.confidence_label)},
            {"matched_cues", list(c.matched_cues)},
            {"matched_papers", c.matched_papers},
            {"actionable_matches", c.actionable_matches},
            {"promoted", c.promoted}};
}

Json to_json(const DiscriminatorCue& d) {
    return {{"cue", d.cue}, {"count", d.count}, {"tier", tier_code(d.tier)}, {"channel", channel_name(d.channel)}};
}

Json to_json(const PairDiscrimination& p) {
    Json j = {{"state_a", p.state_a},
              {"state_b", p.state_b},
              {"shared", p.shared},
              {"jaccard", p.jaccard},
              {"observed_a", list(p.observed_a)},
              {"observed_b", list(p.observed_b)},
              {"absent_a", list(p.absent_a)},
              {"absent_b", list(p.absent_b)},
              {"checkable_a", list(p.checkable_a)},
              {"checkable_b", list(p.checkable_b)},
              {"ambiguous", p.ambiguous}};
    j["favored"] = p.favored ? Json(*p.favored) : Json(nullptr);
    j["promoted"] = p.promoted ? Json(*p.promoted) : Json(nullptr);
    return j;
}

Json to_json(const MixedState& m) { return {{"label", m.label}, {"states", m.states}, {"support", m.support}}; }

Json to_json(const Suggestion& s) {
    return {{"cue", s.cue},
            {"state", s.state},
            {"count", s.count},
            {"tier", tier_code(s.tier)},
            {"channel", channel_name(s.channel)}};
}

Json to_json(const InferenceResult& r) {
    Json j = {{"observed_cues", r.observed_cues},
              {"absent_cues", r.absent_cues},
              {"unknown_cues", r.unknown_cues},
              {"min_tier", tier_code(r.min_tier)},
              {"candidates", list(r.candidates)},
              {"discriminator_report", list(r.discriminator_report)},
              {"suggested_next_cues", list(r.suggested_next_cues)}};
    j["mixed_state"] = r.mixed_state ? to_json(*r.mixed_state) : Json(nullptr);
    return j;
}

Json to_json(const InferenceOptions& o) {
    Json w = Json::object();
    for (int i = 0; i < 6; ++i) w[tier_code(static_cast<RelationshipTier>(i + 1))] = o.weights.w[i];
    return {{"weights", w},
            {"min_tier", tier_code(o.min_tier)},
            {"disambiguation_depth", o.disambiguation_depth},
            {"min_shared", o.min_shared},
            {"suggestions", o.suggestions}};
}

Json to_json(const ObservationDelta& d) {
    Json j = {{"observed", d.observed}, {"absent", d.absent}};
    j["timestamp"] = d.timestamp ? Json(*d.timestamp) : Json(nullptr);
    return j;
}

Json to_json(const DiagnosticSession& s) {
    Json obs = {{"observed_cues", s.accumulated.observed_cues}, {"absent_cues", s.accumulated.absent_cues}};
    obs["timestamp"] = s.accumulated.timestamp ? Json(*s.accumulated.timestamp) : Json(nullptr);
    return {{"session_id", s.session_id},
            {"options", to_json(s.options)},
            {"accumulated", obs},
            {"deltas", list(s.deltas)},
            {"history", list(s.history)},
            {"current", s.history.empty() ? Json(nullptr) : to_json(s.history.back())}};
}

Json to_json(const PowerLawFit& f) {
    return {{"alpha", f.alpha},
            {"alpha_se", f.alpha_se},
            {"alpha_se_kind", "asymptotic"},
            {"x_min", f.x_min},
            {"ks_distance", f.ks_distance},
            {"n_tail", f.n_tail},
            {"n", f.n},
            {"log_likelihood", f.log_likelihood}};
}

Json to_json(const GoodnessOfFit& g) {
    return {{"p_value", g.p_value},
            {"replicates", g.replicates},
            {"completed", g.completed},
            {"failed", g.failed},
            {"observed_ks", g.observed_ks},
            {"ks_mean", g.ks_mean},
            {"ks_min", g.ks_min},
            {"ks_max", g.ks_max},
            {"ks_median", g.ks_median},
            {"seed", g.seed},
            {"failures", g.failures}};
}

Json to_json(const LikelihoodRatioResult& r) {
    Json params = Json::object();
    for (std::size_t i = 0; i < r.alternative_params.size() && i < r.alternative_param_names.size(); ++i)
        params[r.alternative_param_names[i]] = r.alternative_params[i];
    return {{"model_a", r.model_a},
            {"model_b", r.model_b},
            {"R", r.R},
            {"log_likelihood_ratio", r.log_likelihood_ratio},
            {"p_value", r.p_value},
            {"alternative_params", params}};
}

Json to_json(const TailModel& m) {
    Json params = Json::object();
    for (std::size_t i = 0; i < m.params.size() && i < m.param_names.size(); ++i) params[m.param_names[i]] = m.params[i];
    return {{"name", m.name}, {"x_min", m.x_min}, {"params", params}, {"log_likelihood", m.log_likelihood}};
}

Json to_json(const PlotData& p) {
    Json pts = Json::array(), bins = Json::array();
    for (auto& q : p.points)
        pts.push_back({{"x", q.x},
                       {"empirical_ccdf", q.empirical_ccdf},
                       {"fitted_ccdf", q.fitted_ccdf},
                       {"empirical_pdf", q.empirical_pdf},
                       {"fitted_pdf", q.fitted_pdf}});
    for (auto& b : p.log_bins) bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"center", b.center}, {"density", b.density}});
    return {{"points", pts}, {"log_bins", bins}};
}

Json to_json(const ApiError& e) {
    return {{"code", e.machine_code}, {"message", e.human_message}, {"status", e.http_status}};
}

Json framework_to_json(const Framework& fw) {
    Json levels = {{"vocabulary", list(fw.vocabulary)},
                   {"clusters", list(fw.clusters)},
                   {"profiles", list(fw.profiles)},
                   {"pairs", list(fw.pairs)}};
    return {{"schema_version", Framework::kSchemaVersion},
            {"dictionary", Json::parse(dictionary_to_json(fw.dictionary))},
            {"index", to_json(fw.index)},
            {"config", to_json(fw.config)},
            {"levels", levels},
            {"normalization", to_json(fw.normalization)}};
}

Framework framework_from_json(const Json& doc) {
    if (!doc.is_object()) bad_doc("top level must be an object");
    auto& ver = field(doc, "schema_version");
    if (!ver.is_number_integer() || ver.get<int>() != Framework::kSchemaVersion)
        bad_doc("unsupported schema_version " + ver.dump());
    Framework fw;
    fw.dictionary = parse_dictionary(field(doc, "dictionary").dump());
    auto& cfg = field(doc, "config");
    fw.config.min_shared = get_count(cfg, "min_shared");
    auto& prof = field(cfg, "profile");
    fw.config.profile.top_k = get_count(prof, "top_k");
    auto mt = parse_relationship_tier(get_string(prof, "min_tier"));
    if (!mt) bad_doc("config.profile.min_tier is not a tier");
    fw.config.profile.min_tier = *mt;
    fw.index = index_from_json(field(doc, "index"), fw.dictionary);
    fw.normalization = report_from_json(field(doc, "normalization"));
    field(doc, "levels");
    return fw;
}

TierWeights weights_from_json(const Json& j) {
    TierWeights w;
    if (j.is_array()) {
        if (j.size() != 6) bad_request("weights array must have 6 entries (R1..R6)");
        for (std::size_t i = 0; i < 6; ++i) {
            if (!j[i].is_number()) bad_request("weights must be numbers");
            w.w[i] = j[i].get<double>();
        }
    } else if (j.is_object()) {
        for (auto& [k, v] : j.items()) {
            auto t = parse_relationship_tier(k);
            if (!t) bad_request("unknown weight key '" + k + "'");
            if (!v.is_number()) bad_request("weights must be numbers");
            w.w[static_cast<int>(*t) - 1] = v.get<double>();
        }
    } else {
        bad_request("weights must be an array or an object keyed R1..R6");
    }
    for (double x : w.w)
        if (!(x >= 0)) bad_request("weights must be non-negative");
    return w;
}

InferenceOptions options_from_json(const Json& j, InferenceOptions base) {
    if (j.is_null()) return base;
    if (!j.is_object()) bad_request("options must be an object");
    if (auto it = j.find("min_tier"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) bad_request("min_tier must be a string");
        base.min_tier = parse_min_tier(it->get<std::string>());
    }
    if (auto it = j.find("weights"); it != j.end() && !it->is_null()) base.weights = weights_from_json(*it);
    base.disambiguation_depth = request_count(j, "disambiguation_depth", base.disambiguation_depth);
    base.min_shared = request_count(j, "min_shared", base.min_shared);
    base.suggestions = request_count(j, "suggestions", base.suggestions);
    return base;
}

ObservationDelta delta_from_json(const Json& j) {
    if (!j.is_object()) bad_request("observation body must be a JSON object");
    ObservationDelta d;
    d.observed = string_list(j, "observed");
    auto more = string_list(j, "observed_cues");
    d.observed.insert(d.observed.end(), more.begin(), more.end());
    d.absent = string_list(j, "absent");
    more = string_list(j, "absent_cues");
    d.absent.insert(d.absent.end(), more.begin(), more.end());
    if (auto it = j.find("timestamp"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) bad_request("timestamp must be a string");
        d.timestamp = it->get<std::string>();
    }
    return d;
}

Json session_record(const DiagnosticSession& s) {
    return {{"session_id", s.session_id}, {"options", to_json(s.options)}, {"deltas", list(s.deltas)}};
}

DiagnosticSession session_from_record(const Json& j, const Framework& fw) {
    if (!j.is_object() || !j.contains("session_id") || !j["session_id"].is_string())
        throw Error(ErrorCode::ParseError, "session record needs a session_id");
    auto opt = options_from_json(j.value("options", Json(nullptr)));
    std::vector<ObservationDelta> deltas;
    if (auto it = j.find("deltas"); it != j.end())
        for (auto& d : *it) deltas.push_back(delta_from_json(d));
    return replay_session(j["session_id"].get<std::string>(), deltas, fw, opt);
}

Json parse_request_json(const std::string& body) {
    if (trim(body).empty()) return Json::object();
    try {
        return Json::parse(body);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::MalformedRequest, std::string("request body is not valid JSON: ") + e.what());
    }
}

}  // namespace nvsyn
