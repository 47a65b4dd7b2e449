#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nvsyn/framework.hpp"

namespace nvsyn {

struct Observation {
    std::set<std::string> observed_cues;
    std::set<std::string> absent_cues;
    std::optional<std::string> timestamp;
};

struct TierWeights {
    std::array<double, 6> w{6, 5, 4, 3, 2, 1};  // R1..R6
    double operator()(RelationshipTier t) const { return w[static_cast<int>(t) - 1]; }
    bool operator==(const TierWeights&) const = default;
};

enum class ConfidenceLabel { High, Moderate, Low, Exploratory };
const char* confidence_label_name(ConfidenceLabel c);

struct MatchedCue {
    std::string cue;
    std::size_t count = 0;
    RelationshipTier tier = RelationshipTier::R6;
    bool operator==(const MatchedCue&) const = default;
};

struct CandidateState {
    std::string state;
    std::vector<MatchedCue> matched_cues;  // ranked
    double score = 0;
    double coverage = 0;
    RelationshipTier best_tier = RelationshipTier::R6;
    ConfidenceLabel confidence_label = ConfidenceLabel::Exploratory;
    std::size_t matched_papers = 0;  // sum of matched relationship counts
    std::size_t actionable_matches = 0;  // matches at R1-R4
    bool promoted = false;
    bool operator==(const CandidateState&) const = default;
};

struct DiscriminatorCue {
    std::string cue;
    std::size_t count = 0;
    RelationshipTier tier = RelationshipTier::R6;
    Channel channel = Channel::FacialExpressions;
    bool operator==(const DiscriminatorCue&) const = default;
};

struct PairDiscrimination {
    std::string state_a, state_b;  // in ranking order at evaluation time
    std::size_t shared = 0;
    double jaccard = 0;
    std::vector<DiscriminatorCue> observed_a, observed_b;
    std::vector<DiscriminatorCue> absent_a, absent_b;
    std::vector<DiscriminatorCue> checkable_a, checkable_b;  // R1-R4, observable, unchecked
    std::optional<std::string> favored;   // only side with observed discriminators
    std::optional<std::string> promoted;  // favored state that had to be moved up
    bool ambiguous = false;
    bool operator==(const PairDiscrimination&) const = default;
};

struct MixedState {
    std::string label;  // "A + B"
    std::vector<std::string> states;
    std::map<std::string, std::vector<std::string>> support;  // own-support cues per state
    bool operator==(const MixedState&) const = default;
};

struct Suggestion {
    std::string cue;
    std::string state;  // candidate the cue discriminates for
    std::size_t count = 0;
    RelationshipTier tier = RelationshipTier::R6;
    Channel channel = Channel::FacialExpressions;
    bool operator==(const Suggestion&) const = default;
};

struct InferenceOptions {
    TierWeights weights;
    RelationshipTier min_tier = RelationshipTier::R6;  // R6 admits everything
    std::size_t disambiguation_depth = 3;
    std::size_t min_shared = 3;
    std::size_t suggestions = 5;
    bool operator==(const InferenceOptions&) const = default;
};

// "high-stakes" | "general" | "exploratory" | R1..R6
RelationshipTier parse_min_tier(const std::string& s);

struct InferenceResult {
    std::vector<std::string> observed_cues;  // canonical
    std::vector<std::string> absent_cues;
    std::vector<std::string> unknown_cues;   // canonical labels not in the index
    RelationshipTier min_tier = RelationshipTier::R6;
    std::vector<CandidateState> candidates;
    std::vector<PairDiscrimination> discriminator_report;
    std::optional<MixedState> mixed_state;
    std::vector<Suggestion> suggested_next_cues;
    bool operator==(const InferenceResult&) const = default;
};

struct CandidateEvidence {
    std::string state;
    std::vector<MatchedCue> matches;
};

// Normalizes raw labels; throws InconsistentObservation if a cue is both
// observed and absent, ExcludedCue for out-of-scope cues.
Observation normalize_observation(const std::vector<std::string>& observed, const std::vector<std::string>& absent,
                                  const NormalizationDictionary& d);

std::vector<CandidateEvidence> candidate_states(const Observation& obs, const EvidenceIndex& idx,
                                                RelationshipTier min_tier = RelationshipTier::R6);
std::vector<CandidateState> score_candidates(const std::vector<CandidateEvidence>& cands, const Observation& obs,
                                             const TierWeights& w = {});
std::vector<PairDiscrimination> disambiguate(std::vector<CandidateState>& ranked, const Observation& obs,
                                             const EvidenceIndex& idx, const InferenceOptions& opt);
std::optional<MixedState> detect_mixed_state(const std::vector<CandidateState>& ranked, const Observation& obs,
                                             const EvidenceIndex& idx,
                                             const std::vector<PairDiscrimination>& report);
std::vector<Suggestion> suggest_next_cues(const InferenceResult& result, const Observation& obs,
                                          const EvidenceIndex& idx, std::size_t k);

InferenceResult run_inference(const Observation& obs, const Framework& fw, const InferenceOptions& opt = {});

struct ObservationDelta {
    std::vector<std::string> observed;
    std::vector<std::string> absent;
    std::optional<std::string> timestamp;
};

struct DiagnosticSession {
    std::string session_id;
    InferenceOptions options;
    Observation accumulated;
    std::vector<ObservationDelta> deltas;
    std::vector<InferenceResult> history;
};

// starts with one snapshot of the empty observation
DiagnosticSession new_session(const std::string& id, const Framework& fw, const InferenceOptions& opt = {});
// Applies the delta (latest assertion wins across deltas) and appends a
// snapshot; the session is left untouched when an error is thrown.
const InferenceResult& session_update(DiagnosticSession& s, const ObservationDelta& delta, const Framework& fw);
DiagnosticSession replay_session(const std::string& id, const std::vector<ObservationDelta>& deltas,
                                 const Framework& fw, const InferenceOptions& opt = {});

}  // namespace nvsyn
