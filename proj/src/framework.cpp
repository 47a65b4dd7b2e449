#include "nvsyn/framework.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nvsyn/error.hpp"
#include "nvsyn/serialization.hpp"
#include "nvsyn/text.hpp"

using json = nlohmann::json;

namespace nvsyn {

bool rank_before(std::size_t count_a, const std::string& label_a, std::size_t count_b, const std::string& label_b) {
    if (count_a != count_b) return count_a > count_b;
    auto fa = fold_label(label_a), fb = fold_label(label_b);
    if (fa != fb) return fa < fb;
    return label_a < label_b;
}

static void sort_ranked(std::vector<RankedCue>& v) {
    std::sort(v.begin(), v.end(),
              [](const RankedCue& a, const RankedCue& b) { return rank_before(a.count, a.cue, b.count, b.cue); });
}

static RankedCue ranked(const EvidenceIndex& idx, const std::string& state, const std::string& cue) {
    const auto& r = idx.relationships.at({state, cue});
    return {cue, r.papers, r.tier, idx.cues.at(cue).channel};
}

bool is_verbal_cue(const std::string& cue) { return starts_with_ci(fold_label(cue), "verbal:"); }

CueVocabularyEntry build_cue_entry(const EvidenceIndex& idx, const std::string& cue) {
    auto it = idx.cues.find(cue);
    if (it == idx.cues.end()) throw Error(ErrorCode::UnknownCue, "unknown cue '" + cue + "'");
    const auto& c = it->second;
    CueVocabularyEntry e;
    e.cue = cue;
    e.channel = c.channel;
    e.observability = observability(c.channel);
    e.component_tier = c.tier;
    e.paper_count = c.papers;
    e.specificity = c.specificity;
    e.actionability = c.actionability;
    if (auto adj = idx.cue_states.find(cue); adj != idx.cue_states.end()) {
        for (auto& [state, n] : adj->second)
            e.associated_states.push_back({state, n, idx.relationships.at({state, cue}).tier});
    }
    std::sort(e.associated_states.begin(), e.associated_states.end(),
              [](const StateLink& a, const StateLink& b) { return rank_before(a.count, a.state, b.count, b.state); });
    return e;
}

std::vector<CueVocabularyEntry> build_cue_vocabulary(const EvidenceIndex& idx) {
    std::vector<CueVocabularyEntry> out;
    out.reserve(idx.cues.size());
    for (auto& [cue, c] : idx.cues) out.push_back(build_cue_entry(idx, cue));
    return out;
}

StateCluster build_state_cluster(const EvidenceIndex& idx, const std::string& state) {
    auto it = idx.states.find(state);
    if (it == idx.states.end()) throw Error(ErrorCode::UnknownState, "unknown state '" + state + "'");
    StateCluster cl;
    cl.state = state;
    cl.component_tier = it->second.tier;
    cl.paper_count = it->second.papers;
    if (auto adj = idx.state_cues.find(state); adj != idx.state_cues.end()) {
        cl.total_cue_relationships = adj->second.size();
        for (auto& [cue, n] : adj->second) {
            ++cl.channel_breakdown[idx.cues.at(cue).channel];
            auto rc = ranked(idx, state, cue);
            if (is_actionable_tier(rc.tier)) cl.top_cues.push_back(rc);
        }
    }
    cl.actionable_relationships = cl.top_cues.size();
    sort_ranked(cl.top_cues);
    return cl;
}

StateProfile build_state_profile(const EvidenceIndex& idx, const std::string& state, const ProfileOptions& opt,
                                 const NormalizationDictionary* d) {
    if (!idx.states.count(state)) throw Error(ErrorCode::UnknownState, "unknown state '" + state + "'");
    if (opt.top_k < 1) throw Error(ErrorCode::DomainError, "top_k must be >= 1");
    StateProfile p;
    p.state = state;
    if (d) {
        if (auto it = d->state_descriptions.find(fold_label(state)); it != d->state_descriptions.end())
            p.definition_text = it->second;
    }
    std::map<Channel, std::vector<RankedCue>> all;
    if (auto adj = idx.state_cues.find(state); adj != idx.state_cues.end()) {
        for (auto& [cue, n] : adj->second) {
            auto rc = ranked(idx, state, cue);
            if (rc.tier > opt.min_tier) continue;
            all[rc.channel].push_back(rc);
            if (is_verbal_cue(cue)) p.verbal_indicators.push_back(rc);
        }
    }
    std::vector<RankedCue> indicators;
    for (auto& [ch, list] : all) {
        sort_ranked(list);
        if (list.size() > opt.top_k) list.resize(opt.top_k);
        for (auto& rc : list) {
            auto a = idx.cues.at(rc.cue).actionability;
            if ((a == ActionabilityLevel::HighlyActionable || a == ActionabilityLevel::ModeratelyActionable) &&
                is_actionable_tier(rc.tier))
                indicators.push_back(rc);
        }
        p.signature[ch] = std::move(list);
    }
    sort_ranked(indicators);
    for (auto& rc : indicators) p.actionable_indicators.push_back(rc.cue);
    sort_ranked(p.verbal_indicators);
    return p;
}

double jaccard_similarity(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (auto& x : a) inter += b.count(x);
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

std::set<std::string> cue_set(const EvidenceIndex& idx, const std::string& state) {
    std::set<std::string> s;
    if (auto adj = idx.state_cues.find(state); adj != idx.state_cues.end())
        for (auto& [cue, n] : adj->second) s.insert(cue);
    return s;
}

ConfusablePair make_pair_report(const EvidenceIndex& idx, const std::string& a, const std::string& b) {
    for (auto* s : {&a, &b})
        if (!idx.states.count(*s)) throw Error(ErrorCode::UnknownState, "unknown state '" + *s + "'");
    ConfusablePair p;
    p.state_a = std::min(a, b);
    p.state_b = std::max(a, b);
    auto ca = cue_set(idx, p.state_a), cb = cue_set(idx, p.state_b);
    for (auto& c : ca) {
        if (cb.count(c)) p.shared_cues.push_back(c);
        else p.specific_a.push_back(ranked(idx, p.state_a, c));
    }
    for (auto& c : cb)
        if (!ca.count(c)) p.specific_b.push_back(ranked(idx, p.state_b, c));
    std::sort(p.shared_cues.begin(), p.shared_cues.end(), [](const std::string& x, const std::string& y) {
        auto fx = fold_label(x), fy = fold_label(y);
        return fx != fy ? fx < fy : x < y;
    });
    sort_ranked(p.specific_a);
    sort_ranked(p.specific_b);
    p.jaccard = jaccard_similarity(ca, cb);
    return p;
}

std::vector<ConfusablePair> find_confusable_pairs(const EvidenceIndex& idx, std::size_t min_shared) {
    if (min_shared < 1) throw Error(ErrorCode::DomainError, "min_shared must be >= 1");
    std::vector<std::string> states;
    std::vector<std::set<std::string>> sets;
    for (auto& [s, e] : idx.states) {
        states.push_back(s);
        sets.push_back(cue_set(idx, s));
    }
    std::vector<ConfusablePair> out;
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            const auto& small = sets[i].size() <= sets[j].size() ? sets[i] : sets[j];
            const auto& large = sets[i].size() <= sets[j].size() ? sets[j] : sets[i];
            std::size_t shared = 0;
            for (auto& c : small) shared += large.count(c);
            if (shared >= min_shared) out.push_back(make_pair_report(idx, states[i], states[j]));
        }
    }
    std::sort(out.begin(), out.end(), [](const ConfusablePair& x, const ConfusablePair& y) {
        if (x.jaccard != y.jaccard) return x.jaccard > y.jaccard;
        if (x.state_a != y.state_a) return x.state_a < y.state_a;
        return x.state_b < y.state_b;
    });
    return out;
}

Discriminators discriminative_cues(const ConfusablePair& pair, const EvidenceIndex& idx) {
    Discriminators d;
    std::set<std::string> shared(pair.shared_cues.begin(), pair.shared_cues.end());
    for (auto& rc : pair.specific_a)
        if (!shared.count(rc.cue)) d.specific_a.push_back(ranked(idx, pair.state_a, rc.cue));
    for (auto& rc : pair.specific_b)
        if (!shared.count(rc.cue)) d.specific_b.push_back(ranked(idx, pair.state_b, rc.cue));
    sort_ranked(d.specific_a);
    sort_ranked(d.specific_b);
    return d;
}

const StateCluster* Framework::cluster(const std::string& state) const {
    for (auto& c : clusters)
        if (c.state == state) return &c;
    return nullptr;
}

const StateProfile* Framework::profile(const std::string& state) const {
    for (auto& p : profiles)
        if (p.state == state) return &p;
    return nullptr;
}

const CueVocabularyEntry* Framework::cue(const std::string& cue) const {
    auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), cue,
                               [](const CueVocabularyEntry& e, const std::string& c) { return e.cue < c; });
    return it != vocabulary.end() && it->cue == cue ? &*it : nullptr;
}

std::string Framework::resolve_state(const std::string& raw) const {
    if (index.states.count(raw)) return raw;
    auto s = normalize_state_label(raw, dictionary);
    if (!index.states.count(s)) throw Error(ErrorCode::UnknownState, "unknown state '" + raw + "'");
    return s;
}

std::string Framework::resolve_cue(const std::string& raw) const {
    if (index.cues.count(raw)) return raw;
    auto c = normalize_cue_label(raw, dictionary).canonical;
    if (!index.cues.count(c)) throw Error(ErrorCode::UnknownCue, "unknown cue '" + raw + "'");
    return c;
}

void build_levels(Framework& fw) {
    const auto& idx = fw.index;
    fw.vocabulary = build_cue_vocabulary(idx);
    fw.clusters.clear();
    fw.profiles.clear();
    for (auto& [s, e] : idx.states) fw.clusters.push_back(build_state_cluster(idx, s));
    std::sort(fw.clusters.begin(), fw.clusters.end(), [](const StateCluster& a, const StateCluster& b) {
        return rank_before(a.paper_count, a.state, b.paper_count, b.state);
    });
    for (auto& c : fw.clusters) fw.profiles.push_back(build_state_profile(idx, c.state, fw.config.profile, &fw.dictionary));
    fw.pairs = find_confusable_pairs(idx, fw.config.min_shared);
}

Framework build_framework(const Corpus& c, const NormalizationDictionary& d, const FrameworkConfig& cfg,
                          const TierThresholds& t) {
    Framework fw;
    fw.dictionary = d;
    fw.config = cfg;
    auto norm = normalize_corpus(c, d);
    fw.normalization = norm.report;
    fw.index = build_evidence_index(norm.mappings, d, t);
    build_levels(fw);
    return fw;
}

std::string export_framework(const Framework& fw) { return framework_to_json(fw).dump(); }

Framework import_framework(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("framework document is not valid JSON: ") + e.what());
    }
    Framework fw = framework_from_json(doc);
    build_levels(fw);
    if (framework_to_json(fw) != doc)
        throw Error(ErrorCode::ParseError, "framework document levels disagree with its evidence index");
    return fw;
}

void save_framework(const Framework& fw, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << export_framework(fw);
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

Framework load_framework(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return import_framework(ss.str());
}

std::string framework_hash(const std::string& document) { return fnv1a_hex(document); }

}  // namespace nvsyn
