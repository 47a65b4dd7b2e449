#include "nvsyn/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nvsyn/error.hpp"
#include "nvsyn/text.hpp"

namespace nvsyn {

namespace {

template <std::size_t N>
int band(long n, const std::array<std::size_t, N>& lower, const char* what) {
    if (n < 1) throw Error(ErrorCode::DomainError, std::string(what) + ": paper count must be >= 1, got " +
                                                       std::to_string(n));
    for (std::size_t i = 0; i < N; ++i)
        if (static_cast<std::size_t>(n) >= lower[i]) return static_cast<int>(i) + 1;
    return static_cast<int>(N) + 1;
}

double pct1(std::size_t num, std::size_t den) {
    if (den == 0) return 0.0;
    return std::round(1000.0 * static_cast<double>(num) / static_cast<double>(den)) / 10.0;
}

}  // namespace

ComponentTier component_tier_state(long n, const TierThresholds& t) {
    return static_cast<ComponentTier>(band(n, t.state, "component_tier_state"));
}

ComponentTier component_tier_cue(long n, const TierThresholds& t) {
    return static_cast<ComponentTier>(band(n, t.cue, "component_tier_cue"));
}

RelationshipTier relationship_tier(long n, const TierThresholds& t) {
    return static_cast<RelationshipTier>(band(n, t.relationship, "relationship_tier"));
}

CombinedConfidence combined_confidence(ComponentTier s, ComponentTier c) {
    auto strong = [](ComponentTier t) { return t <= ComponentTier::T2; };
    auto weak = [](ComponentTier t) { return t >= ComponentTier::T4; };
    using T = ComponentTier;
    // first match in the decision table's row order
    if (strong(s) && strong(c)) return CombinedConfidence::VeryHigh;
    if ((strong(s) && c == T::T3) || (strong(c) && s == T::T3)) return CombinedConfidence::High;
    if ((s == T::T3 && c == T::T3) || (strong(s) && c == T::T4) || (strong(c) && s == T::T4))
        return CombinedConfidence::Moderate;
    if ((weak(s) && !weak(c)) || (weak(c) && !weak(s))) return CombinedConfidence::Low;
    return CombinedConfidence::VeryLow;
}

ActionabilityLevel classify_actionability(const std::string& cue, Channel channel,
                                          const NormalizationDictionary& d) {
    auto key = fold_label(cue);
    const auto& r = d.actionability;
    if (auto it = r.levels.find(key); it != r.levels.end()) return it->second;
    if (auto it = d.specificity.find(key); it != d.specificity.end() && it->second == Specificity::General)
        return r.general_level;
    if (observability(channel) == ObservabilityMode::Instrumental) return r.instrumental_level;
    return r.default_level;
}

const RelationshipEvidence* EvidenceIndex::find(const std::string& state, const std::string& cue) const {
    auto it = relationships.find({state, cue});
    return it == relationships.end() ? nullptr : &it->second;
}

std::size_t EvidenceIndex::count(const std::string& state, const std::string& cue) const {
    auto r = find(state, cue);
    return r ? r->papers : 0;
}

void EvidenceIndex::rederive(const NormalizationDictionary& d) {
    state_cues.clear();
    cue_states.clear();
    for (auto& [name, s] : states) s.tier = component_tier_state(static_cast<long>(s.papers), thresholds);
    for (auto& [name, c] : cues) {
        c.tier = component_tier_cue(static_cast<long>(c.papers), thresholds);
        c.actionability = classify_actionability(name, c.channel, d);
    }
    for (auto& [key, r] : relationships) {
        auto st = states.find(key.first);
        auto cu = cues.find(key.second);
        if (st == states.end() || cu == cues.end())
            throw Error(ErrorCode::ParseError, "relationship (" + key.first + ", " + key.second +
                                                   ") references a missing component");
        if (r.papers > st->second.papers || r.papers > cu->second.papers)
            throw Error(ErrorCode::ParseError, "relationship (" + key.first + ", " + key.second +
                                                   ") has more papers than its components");
        r.tier = relationship_tier(static_cast<long>(r.papers), thresholds);
        r.combined = combined_confidence(st->second.tier, cu->second.tier);
        state_cues[key.first][key.second] = r.papers;
        cue_states[key.second][key.first] = r.papers;
    }
}

EvidenceIndex build_evidence_index(const std::vector<NormalizedMapping>& ms, const NormalizationDictionary& d,
                                   const TierThresholds& t) {
    EvidenceIndex idx;
    idx.thresholds = t;
    idx.total_mappings = ms.size();
    std::map<std::string, std::set<std::string>> state_p, cue_p;
    std::map<RelKey, std::set<std::string>> rel_p;
    std::map<RelKey, std::size_t> rel_rows;
    std::map<std::string, std::array<std::size_t, 9>> cue_ch;
    std::map<std::string, Specificity> cue_spec;
    for (const auto& m : ms) {
        state_p[m.canonical_state].insert(m.raw.paper_id);
        cue_p[m.canonical_cue].insert(m.raw.paper_id);
        RelKey k{m.canonical_state, m.canonical_cue};
        rel_p[k].insert(m.raw.paper_id);
        ++rel_rows[k];
        auto& counts = cue_ch.try_emplace(m.canonical_cue).first->second;
        ++counts[static_cast<std::size_t>(m.channel)];
        if (m.cue_specificity == Specificity::General) cue_spec[m.canonical_cue] = Specificity::General;
    }
    for (auto& [s, p] : state_p) idx.states[s].papers = p.size();
    for (auto& [c, p] : cue_p) {
        auto& e = idx.cues[c];
        e.papers = p.size();
        // majority channel; ties resolved by channel order
        const auto& counts = cue_ch[c];
        std::size_t best = 0;
        for (std::size_t i = 1; i < counts.size(); ++i)
            if (counts[i] > counts[best]) best = i;
        e.channel = static_cast<Channel>(best);
        if (auto it = cue_spec.find(c); it != cue_spec.end()) e.specificity = it->second;
    }
    for (auto& [k, p] : rel_p) {
        auto& r = idx.relationships[k];
        r.papers = p.size();
        r.mappings = rel_rows[k];
    }
    idx.rederive(d);
    return idx;
}

CrossTab cross_tab_confidence_vs_replication(const EvidenceIndex& idx) {
    CrossTab ct;
    for (int i = 0; i < 5; ++i) ct.rows.push_back({static_cast<CombinedConfidence>(i)});
    for (auto& [k, r] : idx.relationships) {
        auto& row = ct.rows[static_cast<int>(r.combined)];
        ++row.total;
        if (r.tier == RelationshipTier::R6) ++row.single_paper;
        ++ct.total_relationships;
    }
    for (auto& row : ct.rows) row.pct_single = pct1(row.single_paper, row.total);
    return ct;
}

static ActionableCoreReport core_from(const EvidenceIndex& idx, std::size_t total_rows,
                                      const std::map<RelKey, std::size_t>& rows) {
    ActionableCoreReport rep;
    std::set<std::string> st, cu;
    std::set<Channel> ch;
    std::size_t covered = 0;
    for (auto& [k, r] : idx.relationships) {
        if (!is_actionable_tier(r.tier)) continue;
        rep.relationships.push_back({k.first, k.second, r.papers, r.tier});
        st.insert(k.first);
        cu.insert(k.second);
        ch.insert(idx.cues.at(k.second).channel);
        if (auto it = rows.find(k); it != rows.end()) covered += it->second;
    }
    std::sort(rep.relationships.begin(), rep.relationships.end(), [](auto& a, auto& b) {
        if (a.papers != b.papers) return a.papers > b.papers;
        if (a.state != b.state) return a.state < b.state;
        return a.cue < b.cue;
    });
    rep.pair_fraction = idx.relationships.empty()
                            ? 0.0
                            : static_cast<double>(rep.relationships.size()) / idx.relationships.size();
    rep.mapping_coverage = total_rows == 0 ? 0.0 : static_cast<double>(covered) / total_rows;
    rep.states = st.size();
    rep.cues = cu.size();
    rep.channels = ch.size();
    return rep;
}

ActionableCoreReport actionable_core(const EvidenceIndex& idx, const std::vector<NormalizedMapping>& ms) {
    std::map<RelKey, std::size_t> rows;
    for (auto& m : ms) ++rows[{m.canonical_state, m.canonical_cue}];
    return core_from(idx, ms.size(), rows);
}

ActionableCoreReport actionable_core(const EvidenceIndex& idx) {
    std::map<RelKey, std::size_t> rows;
    for (auto& [k, r] : idx.relationships) rows[k] = r.mappings;
    return core_from(idx, idx.total_mappings, rows);
}

TierDistribution tier_distribution(const EvidenceIndex& idx) {
    TierDistribution t;
    for (auto& [k, s] : idx.states) ++t.states[s.tier];
    for (auto& [k, c] : idx.cues) ++t.cues[c.tier];
    for (auto& [k, r] : idx.relationships) ++t.relationships[r.tier];
    return t;
}

}  // namespace nvsyn
