#include "nvsyn/inference.hpp"

#include <algorithm>

#include "nvsyn/error.hpp"
#include "nvsyn/text.hpp"

namespace nvsyn {

const char* confidence_label_name(ConfidenceLabel c) {
    switch (c) {
    case ConfidenceLabel::High: return "High";
    case ConfidenceLabel::Moderate: return "Moderate";
    case ConfidenceLabel::Low: return "Low";
    case ConfidenceLabel::Exploratory: return "Exploratory";
    }
    return "";
}

RelationshipTier parse_min_tier(const std::string& s) {
    auto f = fold_label(s);
    if (f == "high-stakes" || f == "high_stakes" || f == "highstakes") return RelationshipTier::R2;
    if (f == "general") return RelationshipTier::R4;
    if (f == "exploratory" || f == "all") return RelationshipTier::R6;
    if (auto t = parse_relationship_tier(s)) return *t;
    throw Error(ErrorCode::MalformedRequest,
                "min tier must be R1..R6 or one of high-stakes, general, exploratory; got '" + s + "'");
}

Observation normalize_observation(const std::vector<std::string>& observed, const std::vector<std::string>& absent,
                                  const NormalizationDictionary& d) {
    Observation o;
    for (auto& raw : observed)
        if (!trim(raw).empty()) o.observed_cues.insert(normalize_cue_label(raw, d).canonical);
    for (auto& raw : absent)
        if (!trim(raw).empty()) o.absent_cues.insert(normalize_cue_label(raw, d).canonical);
    for (auto& c : o.observed_cues)
        if (o.absent_cues.count(c))
            throw Error(ErrorCode::InconsistentObservation, "cue '" + c + "' is asserted both observed and absent");
    return o;
}

std::vector<CandidateEvidence> candidate_states(const Observation& obs, const EvidenceIndex& idx,
                                                RelationshipTier min_tier) {
    std::map<std::string, std::vector<MatchedCue>> by_state;
    bool any_known = false;
    for (auto& cue : obs.observed_cues) {
        auto it = idx.cue_states.find(cue);
        if (it == idx.cue_states.end()) continue;
        any_known = true;
        for (auto& [state, n] : it->second) {
            auto tier = idx.relationships.at({state, cue}).tier;
            if (tier > min_tier) continue;
            by_state[state].push_back({cue, n, tier});
        }
    }
    if (!obs.observed_cues.empty() && !any_known)
        throw Error(ErrorCode::NoKnownCues, "none of the observed cues appear in the evidence index");
    std::vector<CandidateEvidence> out;
    for (auto& [state, matches] : by_state) {
        std::sort(matches.begin(), matches.end(), [](const MatchedCue& a, const MatchedCue& b) {
            return rank_before(a.count, a.cue, b.count, b.cue);
        });
        out.push_back({state, std::move(matches)});
    }
    return out;
}

static bool score_order(const CandidateState& a, const CandidateState& b) {
    if (a.score != b.score) return a.score > b.score;
    return rank_before(a.matched_papers, a.state, b.matched_papers, b.state);
}

std::vector<CandidateState> score_candidates(const std::vector<CandidateEvidence>& cands, const Observation& obs,
                                             const TierWeights& w) {
    std::vector<CandidateState> out;
    std::size_t n_obs = obs.observed_cues.size();
    for (auto& ce : cands) {
        CandidateState c;
        c.state = ce.state;
        c.matched_cues = ce.matches;
        for (auto& m : ce.matches) {
            c.score += w(m.tier);
            c.matched_papers += m.count;
            if (m.tier < c.best_tier) c.best_tier = m.tier;
            if (is_actionable_tier(m.tier)) ++c.actionable_matches;
        }
        c.coverage = n_obs == 0 ? 0.0 : static_cast<double>(ce.matches.size()) / static_cast<double>(n_obs);
        bool covered = 3 * ce.matches.size() >= 2 * n_obs;
        if (c.actionable_matches >= 2 && covered) c.confidence_label = ConfidenceLabel::High;
        else if (c.actionable_matches >= 1) c.confidence_label = ConfidenceLabel::Moderate;
        else if (c.best_tier == RelationshipTier::R5) c.confidence_label = ConfidenceLabel::Low;
        else c.confidence_label = ConfidenceLabel::Exploratory;
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), score_order);
    return out;
}

namespace {

DiscriminatorCue disc(const EvidenceIndex& idx, const std::string& state, const std::string& cue) {
    const auto& r = idx.relationships.at({state, cue});
    return {cue, r.papers, r.tier, idx.cues.at(cue).channel};
}

bool observable_channel(Channel c) { return observability(c) != ObservabilityMode::Instrumental; }

void sort_disc(std::vector<DiscriminatorCue>& v) {
    std::sort(v.begin(), v.end(), [](const DiscriminatorCue& a, const DiscriminatorCue& b) {
        return rank_before(a.count, a.cue, b.count, b.cue);
    });
}

// cues of `state` that `other` lacks
std::vector<std::string> specific_to(const EvidenceIndex& idx, const std::string& state, const std::string& other) {
    std::vector<std::string> out;
    auto a = idx.state_cues.find(state);
    if (a == idx.state_cues.end()) return out;
    auto b = idx.state_cues.find(other);
    for (auto& [cue, n] : a->second)
        if (b == idx.state_cues.end() || !b->second.count(cue)) out.push_back(cue);
    return out;
}

std::size_t shared_count(const EvidenceIndex& idx, const std::string& a, const std::string& b) {
    auto ia = idx.state_cues.find(a), ib = idx.state_cues.find(b);
    if (ia == idx.state_cues.end() || ib == idx.state_cues.end()) return 0;
    std::size_t n = 0;
    for (auto& [cue, c] : ia->second) n += ib->second.count(cue);
    return n;
}

}  // namespace

std::vector<PairDiscrimination> disambiguate(std::vector<CandidateState>& ranked, const Observation& obs,
                                             const EvidenceIndex& idx, const InferenceOptions& opt) {
    std::vector<PairDiscrimination> report;
    if (ranked.size() < 2) return report;
    std::size_t depth = std::min(opt.disambiguation_depth, ranked.size());
    std::vector<std::string> top;
    for (std::size_t i = 0; i < depth; ++i) top.push_back(ranked[i].state);
    auto position = [&](const std::string& s) {
        for (std::size_t i = 0; i < ranked.size(); ++i)
            if (ranked[i].state == s) return i;
        return ranked.size();
    };
    for (std::size_t i = 0; i < top.size(); ++i) {
        for (std::size_t j = i + 1; j < top.size(); ++j) {
            const auto& a = top[i];
            const auto& b = top[j];
            std::size_t shared = shared_count(idx, a, b);
            if (shared < opt.min_shared) continue;
            PairDiscrimination pd;
            pd.state_a = a;
            pd.state_b = b;
            pd.shared = shared;
            pd.jaccard = jaccard_similarity(cue_set(idx, a), cue_set(idx, b));
            auto fill = [&](const std::string& s, const std::string& other, auto& observed, auto& absent,
                            auto& checkable) {
                for (auto& cue : specific_to(idx, s, other)) {
                    auto d = disc(idx, s, cue);
                    if (obs.observed_cues.count(cue)) observed.push_back(d);
                    else if (obs.absent_cues.count(cue)) absent.push_back(d);
                    else if (is_actionable_tier(d.tier) && observable_channel(d.channel)) checkable.push_back(d);
                }
                sort_disc(observed);
                sort_disc(absent);
                sort_disc(checkable);
            };
            fill(a, b, pd.observed_a, pd.absent_a, pd.checkable_a);
            fill(b, a, pd.observed_b, pd.absent_b, pd.checkable_b);
            if (!pd.observed_a.empty() && !pd.observed_b.empty()) {
                pd.ambiguous = true;
            } else if (!pd.observed_a.empty() || !pd.observed_b.empty()) {
                const auto& winner = pd.observed_a.empty() ? b : a;
                const auto& loser = pd.observed_a.empty() ? a : b;
                pd.favored = winner;
                auto pw = position(winner), pl = position(loser);
                if (pw > pl) {
                    auto moved = ranked[pw];
                    moved.promoted = true;
                    ranked.erase(ranked.begin() + static_cast<long>(pw));
                    ranked.insert(ranked.begin() + static_cast<long>(pl), std::move(moved));
                    pd.promoted = winner;
                }
            }
            report.push_back(std::move(pd));
        }
    }
    return report;
}

std::optional<MixedState> detect_mixed_state(const std::vector<CandidateState>& ranked, const Observation& obs,
                                             const EvidenceIndex& idx,
                                             const std::vector<PairDiscrimination>& report) {
    (void)obs;
    if (ranked.size() < 2) return std::nullopt;
    const auto& a = ranked[0];
    const auto& b = ranked[1];
    if (a.actionable_matches < 2 || b.actionable_matches < 2) return std::nullopt;
    for (auto& pd : report) {
        bool same = (pd.state_a == a.state && pd.state_b == b.state) || (pd.state_a == b.state && pd.state_b == a.state);
        if (same && pd.promoted) return std::nullopt;
    }
    // own support: an actionable match the other state documents less often
    auto support = [&](const CandidateState& x, const CandidateState& y) {
        std::vector<std::string> cues;
        for (auto& m : x.matched_cues)
            if (is_actionable_tier(m.tier) && m.count > idx.count(y.state, m.cue)) cues.push_back(m.cue);
        return cues;
    };
    auto sa = support(a, b), sb = support(b, a);
    if (sa.empty() || sb.empty()) return std::nullopt;
    MixedState ms;
    ms.label = a.state + " + " + b.state;
    ms.states = {a.state, b.state};
    ms.support[a.state] = sa;
    ms.support[b.state] = sb;
    return ms;
}

std::vector<Suggestion> suggest_next_cues(const InferenceResult& result, const Observation& obs,
                                          const EvidenceIndex& idx, std::size_t k) {
    std::vector<Suggestion> out;
    if (result.candidates.size() < 2 || k == 0) return out;
    const auto& a = result.candidates[0].state;
    const auto& b = result.candidates[1].state;
    for (auto [s, o] : {std::pair{&a, &b}, std::pair{&b, &a}}) {
        for (auto& cue : specific_to(idx, *s, *o)) {
            if (obs.observed_cues.count(cue) || obs.absent_cues.count(cue)) continue;
            auto d = disc(idx, *s, cue);
            if (!observable_channel(d.channel)) continue;
            // umbrella labels like "body posture" are not something to go and check
            if (idx.cues.at(cue).specificity == Specificity::General) continue;
            out.push_back({cue, *s, d.count, d.tier, d.channel});
        }
    }
    std::sort(out.begin(), out.end(), [](const Suggestion& x, const Suggestion& y) {
        if (x.count != y.count || x.cue != y.cue) return rank_before(x.count, x.cue, y.count, y.cue);
        return x.state < y.state;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

InferenceResult run_inference(const Observation& obs, const Framework& fw, const InferenceOptions& opt) {
    for (auto& c : obs.observed_cues)
        if (obs.absent_cues.count(c))
            throw Error(ErrorCode::InconsistentObservation, "cue '" + c + "' is asserted both observed and absent");
    const auto& idx = fw.index;
    InferenceResult r;
    r.min_tier = opt.min_tier;
    r.observed_cues.assign(obs.observed_cues.begin(), obs.observed_cues.end());
    r.absent_cues.assign(obs.absent_cues.begin(), obs.absent_cues.end());
    for (auto& c : obs.observed_cues)
        if (!idx.cues.count(c)) r.unknown_cues.push_back(c);
    auto cands = candidate_states(obs, idx, opt.min_tier);
    r.candidates = score_candidates(cands, obs, opt.weights);
    r.discriminator_report = disambiguate(r.candidates, obs, idx, opt);
    r.mixed_state = detect_mixed_state(r.candidates, obs, idx, r.discriminator_report);
    r.suggested_next_cues = suggest_next_cues(r, obs, idx, opt.suggestions);
    return r;
}

DiagnosticSession new_session(const std::string& id, const Framework& fw, const InferenceOptions& opt) {
    DiagnosticSession s;
    s.session_id = id;
    s.options = opt;
    s.history.push_back(run_inference(s.accumulated, fw, opt));
    return s;
}

const InferenceResult& session_update(DiagnosticSession& s, const ObservationDelta& delta, const Framework& fw) {
    auto d = normalize_observation(delta.observed, delta.absent, fw.dictionary);
    Observation next = s.accumulated;
    for (auto& c : d.observed_cues) {
        next.absent_cues.erase(c);
        next.observed_cues.insert(c);
    }
    for (auto& c : d.absent_cues) {
        next.observed_cues.erase(c);
        next.absent_cues.insert(c);
    }
    if (delta.timestamp) next.timestamp = delta.timestamp;
    auto result = run_inference(next, fw, s.options);
    s.accumulated = std::move(next);
    s.deltas.push_back(delta);
    s.history.push_back(std::move(result));
    return s.history.back();
}

DiagnosticSession replay_session(const std::string& id, const std::vector<ObservationDelta>& deltas,
                                 const Framework& fw, const InferenceOptions& opt) {
    auto s = new_session(id, fw, opt);
    for (auto& d : deltas) session_update(s, d, fw);
    return s;
}

}  // namespace nvsyn
