#include "nvsyn/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "nvsyn/error.hpp"
#include "nvsyn/text.hpp"

using json = nlohmann::json;

namespace nvsyn {

const char* channel_name(Channel c) {
    switch (c) {
    case Channel::FacialExpressions: return "FacialExpressions";
    case Channel::EyeMovements: return "EyeMovements";
    case Channel::BodyPosture: return "BodyPosture";
    case Channel::Behavioral: return "Behavioral";
    case Channel::VoiceParalinguistic: return "VoiceParalinguistic";
    case Channel::HeadMovements: return "HeadMovements";
    case Channel::HandArmGestures: return "HandArmGestures";
    case Channel::Physiology: return "Physiology";
    case Channel::Multimodal: return "Multimodal";
    }
    return "";
}

const char* channel_short(Channel c) {
    switch (c) {
    case Channel::FacialExpressions: return "Facial";
    case Channel::EyeMovements: return "Eye";
    case Channel::BodyPosture: return "Body";
    case Channel::Behavioral: return "Behavioral";
    case Channel::VoiceParalinguistic: return "Voice";
    case Channel::HeadMovements: return "Head";
    case Channel::HandArmGestures: return "Gesture";
    case Channel::Physiology: return "Physiology";
    case Channel::Multimodal: return "Multimodal";
    }
    return "";
}

const char* channel_display(Channel c) {
    switch (c) {
    case Channel::FacialExpressions: return "Facial Expressions";
    case Channel::EyeMovements: return "Eye Movements";
    case Channel::BodyPosture: return "Body Posture/Movement";
    case Channel::Behavioral: return "Behavioral";
    case Channel::VoiceParalinguistic: return "Voice/Paralinguistic";
    case Channel::HeadMovements: return "Head Movements";
    case Channel::HandArmGestures: return "Hand/Arm Gestures";
    case Channel::Physiology: return "Physiology";
    case Channel::Multimodal: return "Multimodal";
    }
    return "";
}

ObservabilityMode observability(Channel c) {
    switch (c) {
    case Channel::Behavioral:
    case Channel::Physiology:
    case Channel::Multimodal:
        return ObservabilityMode::Instrumental;
    case Channel::EyeMovements:
        return ObservabilityMode::Mixed;
    default:
        return ObservabilityMode::Observable;
    }
}

const char* observability_name(ObservabilityMode m) {
    switch (m) {
    case ObservabilityMode::Observable: return "Observable";
    case ObservabilityMode::Instrumental: return "Instrumental";
    case ObservabilityMode::Mixed: return "Mixed";
    }
    return "";
}

std::optional<ObservabilityMode> parse_observability(const std::string& s) {
    auto f = fold_label(s);
    if (f == "observable") return ObservabilityMode::Observable;
    if (f == "instrumental") return ObservabilityMode::Instrumental;
    if (f == "mixed") return ObservabilityMode::Mixed;
    return std::nullopt;
}

namespace {

const std::vector<std::pair<const char*, Channel>>& alias_table() {
    static const std::vector<std::pair<const char*, Channel>> t = {
        {"facial", Channel::FacialExpressions},
        {"face", Channel::FacialExpressions},
        {"facial expressions", Channel::FacialExpressions},
        {"facial expression", Channel::FacialExpressions},
        {"eye", Channel::EyeMovements},
        {"eyes", Channel::EyeMovements},
        {"gaze", Channel::EyeMovements},
        {"eye movements", Channel::EyeMovements},
        {"body", Channel::BodyPosture},
        {"posture", Channel::BodyPosture},
        {"body posture", Channel::BodyPosture},
        {"body posture/movement", Channel::BodyPosture},
        {"behavior", Channel::Behavioral},
        {"behaviour", Channel::Behavioral},
        {"behavioural", Channel::Behavioral},
        {"voice", Channel::VoiceParalinguistic},
        {"speech", Channel::VoiceParalinguistic},
        {"paralinguistic", Channel::VoiceParalinguistic},
        {"voice/paralinguistic", Channel::VoiceParalinguistic},
        {"head", Channel::HeadMovements},
        {"head movements", Channel::HeadMovements},
        {"gesture", Channel::HandArmGestures},
        {"gestures", Channel::HandArmGestures},
        {"hand", Channel::HandArmGestures},
        {"hand/arm gestures", Channel::HandArmGestures},
        {"physiological", Channel::Physiology},
        {"physio", Channel::Physiology},
        {"multi-modal", Channel::Multimodal},
    };
    return t;
}

}  // namespace

std::optional<Channel> parse_channel_strict(const std::string& token) {
    auto f = fold_label(token);
    for (auto c : kAllChannels)
        if (fold_label(channel_name(c)) == f) return c;
    return std::nullopt;
}

std::optional<Channel> parse_channel(const std::string& token) {
    if (auto c = parse_channel_strict(token)) return c;
    auto f = fold_label(token);
    for (auto& [alias, ch] : alias_table())
        if (f == alias) return ch;
    return std::nullopt;
}

Channel suggest_channel(const std::string& token) {
    if (auto c = parse_channel(token)) return *c;
    auto f = fold_label(token);
    Channel best = Channel::FacialExpressions;
    std::size_t best_d = static_cast<std::size_t>(-1);
    for (auto c : kAllChannels) {
        auto d = levenshtein(f, fold_label(channel_name(c)));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

CorpusFormat parse_format(const std::string& s) {
    auto f = fold_label(s);
    if (f == "jsonl") return CorpusFormat::Jsonl;
    if (f == "csv") return CorpusFormat::Csv;
    throw Error(ErrorCode::ParseError, "unknown corpus format '" + s + "' (expected jsonl or csv)");
}

CorpusFormat format_for_path(const std::string& path) {
    auto dot = path.rfind('.');
    if (dot != std::string::npos && fold_label(path.substr(dot + 1)) == "csv") return CorpusFormat::Csv;
    return CorpusFormat::Jsonl;
}

namespace {

RawMapping make_mapping(std::size_t row, const std::string& paper_id, std::optional<int> year,
                        const std::string& raw_state, const std::string& raw_cue,
                        const std::string& channel, const std::string& context) {
    auto require = [&](const std::string& v, const char* field) {
        if (trim(v).empty())
            throw Error(ErrorCode::ParseError,
                        "row " + std::to_string(row) + ": missing required field " + field, row);
    };
    require(paper_id, "paper_id");
    require(raw_state, "raw_state");
    require(raw_cue, "raw_cue");
    RawMapping m{paper_id, year, raw_state, raw_cue, std::nullopt, channel, context};
    if (!trim(channel).empty()) {
        m.channel = parse_channel(channel);
        if (!m.channel)
            throw Error(ErrorCode::ParseError,
                        "row " + std::to_string(row) + ": unknown channel token '" + channel + "'", row);
    }
    return m;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::optional<int> parse_year_text(const std::string& s, std::size_t row) {
    auto t = trim(s);
    if (t.empty()) return std::nullopt;
    try {
        std::size_t used = 0;
        int y = std::stoi(t, &used);
        if (used != t.size()) throw std::invalid_argument("trailing");
        return y;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": year is not an integer", row);
    }
}

// RFC 4180 records; newlines inside quotes are preserved
std::vector<std::vector<std::string>> csv_records(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field.push_back(c);
            any = true;
        }
    }
    if (quoted) throw Error(ErrorCode::ParseError, "unterminated quoted CSV field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    return out + "\"";
}

std::string json_string_field(const json& obj, const char* key, std::size_t row) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return "";
    if (!it->is_string())
        throw Error(ErrorCode::ParseError,
                    "row " + std::to_string(row) + ": field " + key + " must be a string", row);
    return it->get<std::string>();
}

}  // namespace

Corpus parse_corpus_jsonl(const std::string& text, const std::string& source) {
    Corpus c;
    std::istringstream in(text);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": invalid JSON", row);
        }
        if (!obj.is_object())
            throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": expected an object", row);
        std::optional<int> year;
        if (auto it = obj.find("year"); it != obj.end() && !it->is_null()) {
            if (it->is_number_integer()) year = it->get<int>();
            else if (it->is_string()) year = parse_year_text(it->get<std::string>(), row);
            else throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": year is not an integer", row);
        }
        c.mappings.push_back(make_mapping(row, json_string_field(obj, "paper_id", row), year,
                                          json_string_field(obj, "raw_state", row),
                                          json_string_field(obj, "raw_cue", row),
                                          json_string_field(obj, "channel", row),
                                          json_string_field(obj, "context", row)));
    }
    c.source_manifest.push_back({source, "jsonl", c.mappings.size()});
    return c;
}

Corpus parse_corpus_csv(const std::string& text, const std::string& source) {
    Corpus c;
    auto records = csv_records(text);
    if (records.empty()) {
        c.source_manifest.push_back({source, "csv", 0});
        return c;
    }
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < records[0].size(); ++i) col[fold_label(records[0][i])] = i;
    for (const char* req : {"paper_id", "raw_state", "raw_cue"})
        if (!col.count(req))
            throw Error(ErrorCode::ParseError, std::string("CSV header lacks column ") + req, 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        std::size_t row = r + 1;
        auto get = [&](const char* key) -> std::string {
            auto it = col.find(key);
            if (it == col.end() || it->second >= rec.size()) return "";
            return rec[it->second];
        };
        c.mappings.push_back(make_mapping(row, get("paper_id"), parse_year_text(get("year"), row),
                                          get("raw_state"), get("raw_cue"), get("channel"),
                                          get("context")));
    }
    c.source_manifest.push_back({source, "csv", c.mappings.size()});
    return c;
}

Corpus load_corpus(const std::string& path, CorpusFormat fmt) {
    auto text = slurp(path);
    return fmt == CorpusFormat::Csv ? parse_corpus_csv(text, path) : parse_corpus_jsonl(text, path);
}

std::string write_corpus_jsonl(const Corpus& c) {
    std::string out;
    for (const auto& m : c.mappings) {
        json o;
        o["paper_id"] = m.paper_id;
        o["year"] = m.year ? json(*m.year) : json(nullptr);
        o["raw_state"] = m.raw_state;
        o["raw_cue"] = m.raw_cue;
        o["channel"] = m.channel_token;
        o["context"] = m.context;
        out += o.dump() + "\n";
    }
    return out;
}

std::string write_corpus_csv(const Corpus& c) {
    std::string out = "paper_id,year,raw_state,raw_cue,channel,context\r\n";
    for (const auto& m : c.mappings) {
        out += csv_quote(m.paper_id) + "," + (m.year ? std::to_string(*m.year) : "") + "," +
               csv_quote(m.raw_state) + "," + csv_quote(m.raw_cue) + "," + csv_quote(m.channel_token) +
               "," + csv_quote(m.context) + "\r\n";
    }
    return out;
}

ValidationReport validate_corpus(const Corpus& c) {
    ValidationReport rep;
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (std::size_t i = 0; i < c.mappings.size(); ++i) {
        const auto& m = c.mappings[i];
        std::size_t row = i + 1;
        for (auto [v, name] : {std::pair{&m.paper_id, "paper_id"}, std::pair{&m.raw_state, "raw_state"},
                               std::pair{&m.raw_cue, "raw_cue"}}) {
            if (trim(*v).empty())
                rep.errors.push_back({row, "empty_field", std::string("empty ") + name, ""});
        }
        if (!m.channel_token.empty() && !parse_channel_strict(m.channel_token)) {
            auto sug = channel_name(suggest_channel(m.channel_token));
            if (parse_channel(m.channel_token)) {
                rep.warnings.push_back({row, "channel_suggestion",
                                        "channel token '" + m.channel_token + "' is an alias", sug});
            } else {
                rep.errors.push_back({row, "unknown_channel",
                                      "unknown channel token '" + m.channel_token + "'", sug});
            }
        }
        auto key = std::make_tuple(m.paper_id, m.raw_state, m.raw_cue);
        if (!seen.insert(key).second)
            rep.warnings.push_back({row, "duplicate",
                                    "duplicate (paper_id, raw_state, raw_cue) triple", ""});
    }
    return rep;
}

CorpusStats corpus_stats(const Corpus& c) {
    CorpusStats s;
    s.mappings = c.mappings.size();
    std::map<std::string, std::optional<int>> papers;
    for (const auto& m : c.mappings) {
        auto [it, fresh] = papers.emplace(m.paper_id, m.year);
        if (!fresh && !it->second && m.year) it->second = m.year;
    }
    s.distinct_papers = papers.size();
    for (auto& [id, y] : papers) {
        if (y) ++s.year_histogram[*y];
        else ++s.papers_without_year;
    }
    return s;
}

double fraction_in_window(const CorpusStats& s, int from, int to) {
    std::size_t dated = 0, in = 0;
    for (auto& [y, n] : s.year_histogram) {
        dated += n;
        if (y >= from && y <= to) in += n;
    }
    return dated == 0 ? 0.0 : static_cast<double>(in) / static_cast<double>(dated);
}

}  // namespace nvsyn
