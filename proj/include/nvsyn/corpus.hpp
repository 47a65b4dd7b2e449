#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nvsyn {

enum class Channel {
    FacialExpressions,
    EyeMovements,
    BodyPosture,
    Behavioral,
    VoiceParalinguistic,
    HeadMovements,
    HandArmGestures,
    Physiology,
    Multimodal,
};

enum class ObservabilityMode { Observable, Instrumental, Mixed };

inline constexpr std::array<Channel, 9> kAllChannels = {
    Channel::FacialExpressions, Channel::EyeMovements,   Channel::BodyPosture,
    Channel::Behavioral,        Channel::VoiceParalinguistic, Channel::HeadMovements,
    Channel::HandArmGestures,   Channel::Physiology,     Channel::Multimodal,
};

const char* channel_name(Channel c);
// short label used in profile tables ("Facial", "Eye", ...)
const char* channel_short(Channel c);
// long label used in cluster listings ("Facial Expressions", ...)
const char* channel_display(Channel c);
ObservabilityMode observability(Channel c);
const char* observability_name(ObservabilityMode m);

// canonical name or alias, case-insensitive; nullopt if unknown
std::optional<Channel> parse_channel(const std::string& token);
// exact canonical name, case-insensitive
std::optional<Channel> parse_channel_strict(const std::string& token);
// nearest canonical name by edit distance (alias table first)
Channel suggest_channel(const std::string& token);
std::optional<ObservabilityMode> parse_observability(const std::string& s);

struct RawMapping {
    std::string paper_id;
    std::optional<int> year;
    std::string raw_state;
    std::string raw_cue;
    std::optional<Channel> channel;
    std::string channel_token;  // as written in the file, empty if absent
    std::string context;
};

struct SourceRecord {
    std::string path;
    std::string format;
    std::size_t rows = 0;
};

struct Corpus {
    std::vector<RawMapping> mappings;
    std::vector<SourceRecord> source_manifest;
};

enum class CorpusFormat { Jsonl, Csv };
CorpusFormat parse_format(const std::string& s);
// jsonl unless the extension is .csv
CorpusFormat format_for_path(const std::string& path);

Corpus load_corpus(const std::string& path, CorpusFormat fmt);
Corpus parse_corpus_jsonl(const std::string& text, const std::string& source = "<memory>");
Corpus parse_corpus_csv(const std::string& text, const std::string& source = "<memory>");
std::string write_corpus_jsonl(const Corpus& c);
std::string write_corpus_csv(const Corpus& c);

struct ValidationIssue {
    std::size_t row;  // 1-based
    std::string kind;  // empty_field | channel_suggestion | unknown_channel | duplicate
    std::string message;
    std::string suggestion;
};

struct ValidationReport {
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;
    bool well_formed() const { return errors.empty(); }
};

ValidationReport validate_corpus(const Corpus& c);

struct CorpusStats {
    std::size_t distinct_papers = 0;
    std::size_t mappings = 0;
    std::map<int, std::size_t> year_histogram;  // distinct papers per year
    std::size_t papers_without_year = 0;
};

CorpusStats corpus_stats(const Corpus& c);
// share of dated papers with from <= year <= to
double fraction_in_window(const CorpusStats& s, int from, int to);

}  // namespace nvsyn
