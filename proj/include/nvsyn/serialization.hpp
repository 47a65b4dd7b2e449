#pragma once

#include <json.hpp>

#include "nvsyn/corpus.hpp"
#include "nvsyn/error.hpp"
#include "nvsyn/evidence.hpp"
#include "nvsyn/framework.hpp"
#include "nvsyn/inference.hpp"
#include "nvsyn/normalization.hpp"
#include "nvsyn/powerlaw.hpp"

namespace nvsyn {

using Json = nlohmann::json;

Json to_json(const RankedCue& c);
Json to_json(const StateLink& l);
Json to_json(const CueVocabularyEntry& e);
Json to_json(const StateCluster& c);
Json to_json(const StateProfile& p);
Json to_json(const ConfusablePair& p);
Json to_json(const Discriminators& d);
Json to_json(const RowIssue& i);
Json to_json(const ReductionReport& r);
Json to_json(const ValidationReport& r);
Json to_json(const CorpusStats& s);
Json to_json(const CrossTab& t);
Json to_json(const ActionableCoreReport& r);
Json to_json(const TierDistribution& d);
Json to_json(const TierThresholds& t);
Json to_json(const EvidenceIndex& idx);
Json to_json(const FrameworkConfig& c);
Json to_json(const NormalizedMapping& m);

Json to_json(const MatchedCue& m);
Json to_json(const CandidateState& c);
Json to_json(const DiscriminatorCue& d);
Json to_json(const PairDiscrimination& p);
Json to_json(const MixedState& m);
Json to_json(const Suggestion& s);
Json to_json(const InferenceResult& r);
Json to_json(const InferenceOptions& o);
Json to_json(const ObservationDelta& d);
// summary plus full history
Json to_json(const DiagnosticSession& s);

Json to_json(const PowerLawFit& f);
Json to_json(const GoodnessOfFit& g);
Json to_json(const LikelihoodRatioResult& r);
Json to_json(const TailModel& m);
Json to_json(const PlotData& p);

Json to_json(const ApiError& e);

Json framework_to_json(const Framework& fw);
// dictionary, index, config and report; levels are left for build_levels
Framework framework_from_json(const Json& doc);

ReductionReport report_from_json(const Json& j);
EvidenceIndex index_from_json(const Json& j, const NormalizationDictionary& d);

// request bodies; throw MalformedRequest
ObservationDelta delta_from_json(const Json& j);
InferenceOptions options_from_json(const Json& j, InferenceOptions base = {});
TierWeights weights_from_json(const Json& j);

// persisted form: id, options, deltas (history is rebuilt by replay)
Json session_record(const DiagnosticSession& s);
DiagnosticSession session_from_record(const Json& j, const Framework& fw);

// parses text, mapping parse failures to MalformedRequest
Json parse_request_json(const std::string& body);

}  // namespace nvsyn
