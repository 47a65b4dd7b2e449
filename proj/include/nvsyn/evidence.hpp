#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nvsyn/corpus.hpp"
#include "nvsyn/normalization.hpp"
#include "nvsyn/tiers.hpp"

namespace nvsyn {

// Lower bounds (inclusive) for each tier except the last, strongest first.
struct TierThresholds {
    std::array<std::size_t, 4> state{20, 10, 5, 2};
    std::array<std::size_t, 4> cue{10, 5, 3, 2};
    std::array<std::size_t, 5> relationship{20, 10, 5, 3, 2};
    bool operator==(const TierThresholds&) const = default;
};

// throw DomainError for n < 1
ComponentTier component_tier_state(long n, const TierThresholds& t = {});
ComponentTier component_tier_cue(long n, const TierThresholds& t = {});
RelationshipTier relationship_tier(long n, const TierThresholds& t = {});

CombinedConfidence combined_confidence(ComponentTier s, ComponentTier c);

ActionabilityLevel classify_actionability(const std::string& cue, Channel channel,
                                          const NormalizationDictionary& d);

struct StateEvidence {
    std::size_t papers = 0;
    ComponentTier tier = ComponentTier::T5;
};

struct CueEvidence {
    std::size_t papers = 0;
    ComponentTier tier = ComponentTier::T5;
    Channel channel = Channel::FacialExpressions;
    Specificity specificity = Specificity::Specific;
    ActionabilityLevel actionability = ActionabilityLevel::ModeratelyActionable;
};

struct RelationshipEvidence {
    std::size_t papers = 0;
    std::size_t mappings = 0;  // rows, before paper dedup
    RelationshipTier tier = RelationshipTier::R6;
    CombinedConfidence combined = CombinedConfidence::VeryLow;
};

using RelKey = std::pair<std::string, std::string>;  // (state, cue)

struct EvidenceIndex {
    TierThresholds thresholds;
    std::size_t total_mappings = 0;
    std::map<std::string, StateEvidence> states;
    std::map<std::string, CueEvidence> cues;
    std::map<RelKey, RelationshipEvidence> relationships;
    // adjacency, derived from relationships
    std::map<std::string, std::map<std::string, std::size_t>> state_cues;
    std::map<std::string, std::map<std::string, std::size_t>> cue_states;

    bool empty() const { return relationships.empty(); }
    const RelationshipEvidence* find(const std::string& state, const std::string& cue) const;
    std::size_t count(const std::string& state, const std::string& cue) const;
    // rebuild adjacency and every derived tier from the stored counts
    void rederive(const NormalizationDictionary& d);
};

EvidenceIndex build_evidence_index(const std::vector<NormalizedMapping>& ms, const NormalizationDictionary& d,
                                   const TierThresholds& t = {});

struct CrossTabRow {
    CombinedConfidence level;
    std::size_t total = 0;
    std::size_t single_paper = 0;
    double pct_single = 0;  // percent, one decimal
};

struct CrossTab {
    std::vector<CrossTabRow> rows;  // VeryHigh..VeryLow
    std::size_t total_relationships = 0;
};

CrossTab cross_tab_confidence_vs_replication(const EvidenceIndex& idx);

struct CoreRelationship {
    std::string state, cue;
    std::size_t papers;
    RelationshipTier tier;
};

struct ActionableCoreReport {
    std::vector<CoreRelationship> relationships;
    double pair_fraction = 0;      // core / unique pairs
    double mapping_coverage = 0;   // rows in core / all rows
    std::size_t states = 0, cues = 0, channels = 0;
};

ActionableCoreReport actionable_core(const EvidenceIndex& idx, const std::vector<NormalizedMapping>& ms);
// same, from the per-relationship row counts stored in the index
ActionableCoreReport actionable_core(const EvidenceIndex& idx);

// tiers / percentages over the components present
struct TierDistribution {
    std::map<ComponentTier, std::size_t> states, cues;
    std::map<RelationshipTier, std::size_t> relationships;
};
TierDistribution tier_distribution(const EvidenceIndex& idx);

}  // namespace nvsyn
