#include "nvsyn/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace nvsyn {

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string cue_with_count(const RankedCue& c) { return c.cue + " (" + std::to_string(c.count) + ")"; }

// profile tables list observable channels in this order
constexpr Channel kProfileOrder[] = {Channel::FacialExpressions, Channel::EyeMovements,    Channel::HeadMovements,
                                     Channel::BodyPosture,       Channel::HandArmGestures, Channel::VoiceParalinguistic};

}  // namespace

std::string tier_range(const std::vector<RankedCue>& cues) {
    if (cues.empty()) return "";
    auto lo = cues.front().tier, hi = cues.front().tier;
    for (auto& c : cues) {
        lo = std::min(lo, c.tier);
        hi = std::max(hi, c.tier);
    }
    if (lo == hi) return tier_code(lo);
    return std::string(tier_code(lo)) + "-" + tier_code(hi);
}

std::string render_reduction(const ReductionReport& r) {
    std::ostringstream o;
    o << "rows read:        " << r.input_rows << "\n";
    o << "rows emitted:     " << r.emitted_rows << "\n";
    o << "excluded rows:    " << r.excluded_count << "\n";
    o << "unresolved rows:  " << r.unresolved_channel_count << "\n";
    o << "states:           " << r.raw_state_count << " -> " << r.canonical_state_count << " ("
      << fmt("%.1f", r.state_reduction_pct) << "% reduction)\n";
    o << "cues:             " << r.raw_cue_count << " -> " << r.canonical_cue_count << " ("
      << fmt("%.1f", r.cue_reduction_pct) << "% reduction)\n";
    if (!r.largest_consolidation.first.empty())
        o << "largest state merge: " << r.largest_consolidation.first << " <- " << r.largest_consolidation.second
          << " raw labels\n";
    if (!r.largest_cue_consolidation.first.empty())
        o << "largest cue merge:   " << r.largest_cue_consolidation.first << " <- "
          << r.largest_cue_consolidation.second << " raw labels\n";
    for (auto& i : r.issues) o << "row " << i.row << ": " << i.kind << ": " << i.message << "\n";
    return o.str();
}

std::string render_validation(const ValidationReport& r, const CorpusStats& s) {
    std::ostringstream o;
    o << (r.well_formed() ? "well-formed" : "NOT well-formed") << ": " << s.mappings << " mappings, "
      << s.distinct_papers << " distinct papers, " << r.errors.size() << " errors, " << r.warnings.size()
      << " warnings\n";
    for (auto& e : r.errors) {
        o << "error row " << e.row << " [" << e.kind << "] " << e.message;
        if (!e.suggestion.empty()) o << " (did you mean " << e.suggestion << "?)";
        o << "\n";
    }
    for (auto& w : r.warnings) {
        o << "warning row " << w.row << " [" << w.kind << "] " << w.message;
        if (!w.suggestion.empty()) o << " (-> " << w.suggestion << ")";
        o << "\n";
    }
    if (!s.year_histogram.empty()) {
        o << "papers by year:";
        for (auto& [y, n] : s.year_histogram) o << " " << y << ":" << n;
        o << "\n";
    }
    return o.str();
}

std::string render_cluster(const StateCluster& c, std::size_t top_cues) {
    std::ostringstream o;
    o << c.state << " (" << tier_code(c.component_tier) << ", " << c.paper_count << " papers, "
      << c.total_cue_relationships << " cues, " << c.actionable_relationships << " at R1-R4)\n";
    std::vector<std::pair<Channel, std::size_t>> chans(c.channel_breakdown.begin(), c.channel_breakdown.end());
    std::stable_sort(chans.begin(), chans.end(), [](auto& a, auto& b) { return a.second > b.second; });
    for (auto& [ch, n] : chans) o << "  " << channel_display(ch) << ": " << n << "\n";
    std::size_t shown = 0;
    for (auto& rc : c.top_cues) {
        if (shown++ == top_cues) break;
        o << "    " << cue_with_count(rc) << " " << tier_code(rc.tier) << "\n";
    }
    return o.str();
}

std::string render_clusters(const std::vector<StateCluster>& clusters, std::size_t top_cues) {
    std::string out;
    for (auto& c : clusters) out += render_cluster(c, top_cues);
    return out;
}

std::string render_cue(const CueVocabularyEntry& e) {
    std::ostringstream o;
    o << e.cue << "\n";
    o << "  channel: " << channel_display(e.channel) << " (" << observability_name(e.observability) << ")\n";
    o << "  papers: " << e.paper_count << " (" << tier_code(e.component_tier) << ")\n";
    o << "  specificity: " << specificity_name(e.specificity) << "\n";
    o << "  actionability: " << actionability_name(e.actionability) << "\n";
    for (auto& l : e.associated_states) o << "    " << l.state << " (" << l.count << ") " << tier_code(l.tier) << "\n";
    return o.str();
}

std::string render_profile(const StateProfile& p) {
    std::ostringstream o;
    o << p.state << "\n";
    if (!p.definition_text.empty()) o << p.definition_text << "\n";
    o << "Channel\tCues\tEvidence\n";
    for (auto ch : kProfileOrder) {
        auto it = p.signature.find(ch);
        if (it == p.signature.end() || it->second.empty()) continue;
        o << channel_short(ch) << "\t";
        for (std::size_t i = 0; i < it->second.size(); ++i) o << (i ? ", " : "") << cue_with_count(it->second[i]);
        o << "\t" << tier_range(it->second) << "\n";
    }
    if (!p.actionable_indicators.empty()) {
        o << "Actionable:";
        for (std::size_t i = 0; i < p.actionable_indicators.size(); ++i)
            o << (i ? ", " : " ") << p.actionable_indicators[i];
        o << "\n";
    }
    if (!p.verbal_indicators.empty()) {
        o << "Verbal:";
        for (std::size_t i = 0; i < p.verbal_indicators.size(); ++i)
            o << (i ? ", " : " ") << cue_with_count(p.verbal_indicators[i]);
        o << "\n";
    }
    return o.str();
}

std::string render_discriminators(const ConfusablePair& pair, const Discriminators& d, std::size_t k) {
    std::ostringstream o;
    o << pair.state_a << " vs " << pair.state_b << ": " << pair.shared_cues.size() << " shared cues, Jaccard "
      << fmt("%.3f", pair.jaccard) << "\n";
    o << pair.state_a << "\t" << pair.state_b << "\n";
    std::size_t rows = std::min(k, std::max(d.specific_a.size(), d.specific_b.size()));
    for (std::size_t i = 0; i < rows; ++i) {
        o << (i < d.specific_a.size() ? cue_with_count(d.specific_a[i]) : std::string()) << "\t"
          << (i < d.specific_b.size() ? cue_with_count(d.specific_b[i]) : std::string()) << "\n";
    }
    return o.str();
}

std::string render_cross_tab(const CrossTab& t) {
    std::ostringstream o;
    o << "Combined\tRelationships\tSingle-paper\t%Single\n";
    for (auto& r : t.rows)
        o << confidence_name(r.level) << "\t" << r.total << "\t" << r.single_paper << "\t" << fmt("%.1f", r.pct_single)
          << "\n";
    o << "Total\t" << t.total_relationships << "\n";
    return o.str();
}

std::string render_core(const ActionableCoreReport& r) {
    std::ostringstream o;
    o << "actionable core: " << r.relationships.size() << " relationships (" << fmt("%.1f", 100 * r.pair_fraction)
      << "% of pairs, " << fmt("%.1f", 100 * r.mapping_coverage) << "% of mappings), " << r.states << " states, "
      << r.cues << " cues, " << r.channels << " channels\n";
    return o.str();
}

std::string render_inference(const InferenceResult& r) {
    std::ostringstream o;
    if (r.candidates.empty()) {
        o << "no candidate states\n";
    }
    for (std::size_t i = 0; i < r.candidates.size(); ++i) {
        auto& c = r.candidates[i];
        o << i + 1 << ". " << c.state << "  score " << fmt("%g", c.score) << "  " << confidence_label_name(c.confidence_label)
          << "  coverage " << fmt("%.2f", c.coverage) << (c.promoted ? "  (promoted)" : "") << "\n";
        for (auto& m : c.matched_cues) o << "     " << m.cue << " (" << m.count << ") " << tier_code(m.tier) << "\n";
    }
    if (!r.unknown_cues.empty()) {
        o << "unknown cues:";
        for (auto& u : r.unknown_cues) o << " " << u << ";";
        o << "\n";
    }
    for (auto& p : r.discriminator_report) {
        o << "pair " << p.state_a << " / " << p.state_b << ": ";
        if (p.ambiguous) o << "ambiguous";
        else if (p.favored) o << "favors " << *p.favored;
        else o << "undecided";
        o << "\n";
        if (!p.checkable_a.empty() || !p.checkable_b.empty()) {
            o << "  check for " << p.state_a << ":";
            for (auto& c : p.checkable_a) o << " " << c.cue << ";";
            o << "\n  check for " << p.state_b << ":";
            for (auto& c : p.checkable_b) o << " " << c.cue << ";";
            o << "\n";
        }
    }
    if (r.mixed_state) o << "mixed state: " << r.mixed_state->label << "\n";
    if (!r.suggested_next_cues.empty()) {
        o << "next cues to check:\n";
        for (auto& s : r.suggested_next_cues)
            o << "  " << s.cue << " (" << s.state << ", " << s.count << " papers, " << channel_short(s.channel) << ")\n";
    }
    return o.str();
}

std::string render_fit(const PowerLawFit& f, const GoodnessOfFit* gof, const std::vector<LikelihoodRatioResult>& lrs) {
    std::ostringstream o;
    o << "alpha   " << fmt("%.4f", f.alpha) << " +/- " << fmt("%.4f", f.alpha_se) << " (asymptotic)\n";
    o << "x_min   " << f.x_min << "\n";
    o << "n_tail  " << f.n_tail << " of " << f.n << "\n";
    o << "KS      " << fmt("%.5f", f.ks_distance) << "\n";
    if (gof)
        o << "p       " << fmt("%.4f", gof->p_value) << " (" << gof->completed << "/" << gof->replicates
          << " replicates, seed " << gof->seed << ")\n";
    for (auto& r : lrs)
        o << "vs " << r.model_b << ": R = " << fmt("%.4f", r.R) << ", p = " << fmt("%.4g", r.p_value) << "\n";
    return o.str();
}

}  // namespace nvsyn
