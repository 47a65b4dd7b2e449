#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nvsyn/corpus.hpp"
#include "nvsyn/tiers.hpp"

namespace nvsyn {

struct ActionabilityRules {
    std::map<std::string, ActionabilityLevel> levels;  // folded cue -> level
    ActionabilityLevel general_level = ActionabilityLevel::WeaklyActionable;
    ActionabilityLevel instrumental_level = ActionabilityLevel::NonActionable;
    ActionabilityLevel default_level = ActionabilityLevel::ModeratelyActionable;
};

// Lookup tables are keyed by fold_label(raw). Canonical targets are
// inserted as fixed points when the dictionary is finalized.
struct NormalizationDictionary {
    std::map<std::string, std::string> state_synonyms;
    std::map<std::string, std::string> cue_synonyms;
    std::map<std::string, std::string> au_decodings;  // "AU1+AU2" -> description
    std::map<std::string, Specificity> specificity;   // folded cue
    std::vector<std::string> exclusions;              // folded substrings
    std::map<std::string, Channel> cue_channels;      // folded cue
    ActionabilityRules actionability;
    std::map<std::string, std::string> state_descriptions;  // folded state -> opaque text

    // Adds fixed points for every canonical target; throws ParseError when a
    // target would itself be rewritten to something else.
    void finalize();
};

NormalizationDictionary load_dictionary(const std::string& path);
NormalizationDictionary parse_dictionary(const std::string& json_text);
// canonical JSON form (sorted keys), raw synonym keys as stored (folded)
std::string dictionary_to_json(const NormalizationDictionary& d);

struct AuDecoding {
    std::string code_set;     // canonical "AU1+AU2"
    std::string description;  // decoded text
    bool undecoded = false;   // at least one AU missing from the table
    std::vector<std::string> warnings;
};

// throws MalformedAuCode
AuDecoding decode_action_units(const std::string& code, const NormalizationDictionary& d);
bool looks_like_au_code(const std::string& s);
// "au2 + 1" -> "AU1+AU2"; throws MalformedAuCode
std::string canonical_au_set(const std::string& code);

std::string normalize_state_label(const std::string& raw, const NormalizationDictionary& d);

struct CueNormalization {
    std::string canonical;
    Specificity specificity = Specificity::Specific;
    std::vector<std::string> trace;
    std::vector<std::string> warnings;
};

// throws ExcludedCue
CueNormalization normalize_cue_label(const std::string& raw, const NormalizationDictionary& d);
bool is_excluded_cue(const std::string& raw, const NormalizationDictionary& d);

struct NormalizedMapping {
    RawMapping raw;
    std::string canonical_state;
    std::string canonical_cue;
    Specificity cue_specificity = Specificity::Specific;
    Channel channel = Channel::FacialExpressions;
    std::vector<std::string> normalization_trace;
};

struct RowIssue {
    std::size_t row;  // 1-based
    std::string kind;
    std::string message;
};

struct ReductionReport {
    std::size_t input_rows = 0;
    std::size_t emitted_rows = 0;
    std::size_t raw_state_count = 0, canonical_state_count = 0;
    double state_reduction_pct = 0;
    std::size_t raw_cue_count = 0, canonical_cue_count = 0;
    double cue_reduction_pct = 0;
    std::pair<std::string, std::size_t> largest_consolidation;      // states
    std::pair<std::string, std::size_t> largest_cue_consolidation;  // cues
    std::size_t excluded_count = 0;
    std::size_t unresolved_channel_count = 0;
    std::vector<RowIssue> issues;
};

struct NormalizationResult {
    std::vector<NormalizedMapping> mappings;
    ReductionReport report;
};

NormalizationResult normalize_corpus(const Corpus& c, const NormalizationDictionary& d);

// Feeds canonical labels back in as raw ones (for idempotence checks).
Corpus as_corpus(const std::vector<NormalizedMapping>& ms);

// 1 - canonical/raw as a percentage rounded to one decimal
double reduction_pct(std::size_t raw, std::size_t canonical);

}  // namespace nvsyn
