#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nvsyn/evidence.hpp"
#include "nvsyn/normalization.hpp"

namespace nvsyn {

// count desc, then folded label asc (raw label breaks remaining ties)
bool rank_before(std::size_t count_a, const std::string& label_a, std::size_t count_b, const std::string& label_b);

struct RankedCue {
    std::string cue;
    std::size_t count = 0;
    RelationshipTier tier = RelationshipTier::R6;
    Channel channel = Channel::FacialExpressions;
    bool operator==(const RankedCue&) const = default;
};

struct StateLink {
    std::string state;
    std::size_t count = 0;
    RelationshipTier tier = RelationshipTier::R6;
    bool operator==(const StateLink&) const = default;
};

struct CueVocabularyEntry {
    std::string cue;
    Channel channel = Channel::FacialExpressions;
    ObservabilityMode observability = ObservabilityMode::Observable;
    ComponentTier component_tier = ComponentTier::T5;
    std::size_t paper_count = 0;
    Specificity specificity = Specificity::Specific;
    ActionabilityLevel actionability = ActionabilityLevel::ModeratelyActionable;
    std::vector<StateLink> associated_states;
    bool operator==(const CueVocabularyEntry&) const = default;
};

struct StateCluster {
    std::string state;
    ComponentTier component_tier = ComponentTier::T5;
    std::size_t paper_count = 0;
    std::size_t total_cue_relationships = 0;  // distinct cues linked to the state
    std::map<Channel, std::size_t> channel_breakdown;
    std::vector<RankedCue> top_cues;  // R1-R4 links, ranked
    std::size_t actionable_relationships = 0;
    bool operator==(const StateCluster&) const = default;
};

struct ProfileOptions {
    std::size_t top_k = 4;
    RelationshipTier min_tier = RelationshipTier::R4;  // signature floor
    bool operator==(const ProfileOptions&) const = default;
};

struct StateProfile {
    std::string state;
    std::string definition_text;
    std::map<Channel, std::vector<RankedCue>> signature;
    std::vector<std::string> actionable_indicators;
    std::vector<RankedCue> verbal_indicators;
    bool operator==(const StateProfile&) const = default;
};

struct ConfusablePair {
    std::string state_a, state_b;  // state_a < state_b
    std::vector<std::string> shared_cues;  // sorted
    std::vector<RankedCue> specific_a, specific_b;  // ranked
    double jaccard = 0;
    bool operator==(const ConfusablePair&) const = default;
};

std::vector<CueVocabularyEntry> build_cue_vocabulary(const EvidenceIndex& idx);
CueVocabularyEntry build_cue_entry(const EvidenceIndex& idx, const std::string& cue);
StateCluster build_state_cluster(const EvidenceIndex& idx, const std::string& state);
StateProfile build_state_profile(const EvidenceIndex& idx, const std::string& state, const ProfileOptions& opt,
                                 const NormalizationDictionary* d = nullptr);

double jaccard_similarity(const std::set<std::string>& a, const std::set<std::string>& b);
std::set<std::string> cue_set(const EvidenceIndex& idx, const std::string& state);

// any two states; throws UnknownState
ConfusablePair make_pair_report(const EvidenceIndex& idx, const std::string& a, const std::string& b);
std::vector<ConfusablePair> find_confusable_pairs(const EvidenceIndex& idx, std::size_t min_shared = 3);

struct Discriminators {
    std::vector<RankedCue> specific_a, specific_b;
};
Discriminators discriminative_cues(const ConfusablePair& pair, const EvidenceIndex& idx);

bool is_verbal_cue(const std::string& cue);

struct FrameworkConfig {
    std::size_t min_shared = 3;
    ProfileOptions profile;
    bool operator==(const FrameworkConfig&) const = default;
};

struct Framework {
    static constexpr int kSchemaVersion = 1;
    NormalizationDictionary dictionary;
    EvidenceIndex index;
    FrameworkConfig config;
    std::vector<CueVocabularyEntry> vocabulary;   // Level 1, sorted by label
    std::vector<StateCluster> clusters;           // Level 2, ranked by papers
    std::vector<StateProfile> profiles;           // Level 3, same order as clusters
    std::vector<ConfusablePair> pairs;            // Level 4, Jaccard desc
    ReductionReport normalization;                // summary of the build

    const StateCluster* cluster(const std::string& state) const;
    const StateProfile* profile(const std::string& state) const;
    const CueVocabularyEntry* cue(const std::string& cue) const;
    // accepts raw labels; throws UnknownState / UnknownCue
    std::string resolve_state(const std::string& raw) const;
    std::string resolve_cue(const std::string& raw) const;
};

void build_levels(Framework& fw);
Framework build_framework(const Corpus& c, const NormalizationDictionary& d, const FrameworkConfig& cfg = {},
                          const TierThresholds& t = {});

std::string export_framework(const Framework& fw);
// rebuilds levels from the stored index and verifies them against the document
Framework import_framework(const std::string& json_text);
void save_framework(const Framework& fw, const std::string& path);
Framework load_framework(const std::string& path);
std::string framework_hash(const std::string& document);

}  // namespace nvsyn
