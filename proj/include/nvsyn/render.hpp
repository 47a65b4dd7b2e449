#pragma once

#include <string>

#include "nvsyn/framework.hpp"
#include "nvsyn/inference.hpp"
#include "nvsyn/powerlaw.hpp"

namespace nvsyn {

// Plain-text renderings used by the CLI.

std::string render_reduction(const ReductionReport& r);
std::string render_validation(const ValidationReport& r, const CorpusStats& s);
std::string render_clusters(const std::vector<StateCluster>& clusters, std::size_t top_cues = 5);
std::string render_cluster(const StateCluster& c, std::size_t top_cues = 5);
std::string render_cue(const CueVocabularyEntry& e);
// one line per observable channel: channel, cues with counts, tier range
std::string render_profile(const StateProfile& p);
std::string render_discriminators(const ConfusablePair& pair, const Discriminators& d, std::size_t k = 5);
std::string render_cross_tab(const CrossTab& t);
std::string render_core(const ActionableCoreReport& r);
std::string render_inference(const InferenceResult& r);
std::string render_fit(const PowerLawFit& f, const GoodnessOfFit* gof, const std::vector<LikelihoodRatioResult>& lrs);

// "R1-R3", or "R4" when the range is a single tier
std::string tier_range(const std::vector<RankedCue>& cues);

}  // namespace nvsyn
