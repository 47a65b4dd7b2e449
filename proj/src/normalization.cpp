#include "nvsyn/normalization.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nvsyn/error.hpp"
#include "nvsyn/text.hpp"

using json = nlohmann::json;

namespace nvsyn {

namespace {

void add_fixed_points(std::map<std::string, std::string>& syn, const char* what) {
    std::vector<std::string> targets;
    for (auto& [k, v] : syn) targets.push_back(v);
    for (auto& t : targets) {
        auto key = fold_label(t);
        auto it = syn.find(key);
        if (it == syn.end()) {
            syn.emplace(key, t);
        } else if (it->second != t) {
            throw Error(ErrorCode::ParseError, std::string(what) + " target '" + t +
                                                   "' is itself mapped to '" + it->second + "'");
        }
    }
}

void add_label_fixed_point(std::map<std::string, std::string>& syn, const std::string& label) {
    syn.emplace(fold_label(label), label);
}

}  // namespace

void NormalizationDictionary::finalize() {
    add_fixed_points(state_synonyms, "state synonym");
    add_fixed_points(cue_synonyms, "cue synonym");
}

NormalizationDictionary parse_dictionary(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("dictionary is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "dictionary must be a JSON object");
    NormalizationDictionary d;
    auto section = [&](const char* name) -> const json* {
        auto it = j.find(name);
        if (it == j.end() || it->is_null()) return nullptr;
        return &*it;
    };
    auto string_map = [&](const char* name, std::map<std::string, std::string>& out, bool fold_keys) {
        if (auto s = section(name)) {
            if (!s->is_object()) throw Error(ErrorCode::ParseError, std::string(name) + " must be an object");
            for (auto& [k, v] : s->items()) {
                if (!v.is_string())
                    throw Error(ErrorCode::ParseError, std::string(name) + "['" + k + "'] must be a string");
                out[fold_keys ? fold_label(k) : k] = v.get<std::string>();
            }
        }
    };
    string_map("state_synonyms", d.state_synonyms, true);
    string_map("cue_synonyms", d.cue_synonyms, true);
    std::map<std::string, std::string> au;
    string_map("au_decodings", au, false);
    for (auto& [k, v] : au) {
        try {
            d.au_decodings[canonical_au_set(k)] = v;
        } catch (const Error&) {
            throw Error(ErrorCode::ParseError, "au_decodings key '" + k + "' is not an AU code");
        }
    }
    if (auto s = section("specificity")) {
        for (auto& [k, v] : s->items()) {
            auto sp = v.is_string() ? parse_specificity(v.get<std::string>()) : std::nullopt;
            if (!sp) throw Error(ErrorCode::ParseError, "specificity['" + k + "'] must be Specific or General");
            d.specificity[fold_label(k)] = *sp;
            add_label_fixed_point(d.cue_synonyms, k);
        }
    }
    if (auto s = section("exclusions")) {
        if (!s->is_array()) throw Error(ErrorCode::ParseError, "exclusions must be an array");
        for (auto& v : *s) {
            if (!v.is_string()) throw Error(ErrorCode::ParseError, "exclusions entries must be strings");
            auto f = fold_label(v.get<std::string>());
            if (!f.empty()) d.exclusions.push_back(f);
        }
    }
    if (auto s = section("cue_channels")) {
        for (auto& [k, v] : s->items()) {
            auto ch = v.is_string() ? parse_channel(v.get<std::string>()) : std::nullopt;
            if (!ch) throw Error(ErrorCode::ParseError, "cue_channels['" + k + "'] is not a channel");
            d.cue_channels[fold_label(k)] = *ch;
            add_label_fixed_point(d.cue_synonyms, k);
        }
    }
    if (auto s = section("actionability")) {
        auto level = [&](const json& v, const std::string& where) {
            auto a = v.is_string() ? parse_actionability(v.get<std::string>()) : std::nullopt;
            if (!a) throw Error(ErrorCode::ParseError, "actionability " + where + " is not a level");
            return *a;
        };
        if (auto it = s->find("levels"); it != s->end()) {
            for (auto& [k, v] : it->items()) {
                d.actionability.levels[fold_label(k)] = level(v, "'" + k + "'");
                add_label_fixed_point(d.cue_synonyms, k);
            }
        }
        if (auto it = s->find("general_level"); it != s->end()) d.actionability.general_level = level(*it, "general_level");
        if (auto it = s->find("instrumental_level"); it != s->end())
            d.actionability.instrumental_level = level(*it, "instrumental_level");
        if (auto it = s->find("default_level"); it != s->end()) d.actionability.default_level = level(*it, "default_level");
    }
    if (auto s = section("state_descriptions")) {
        for (auto& [k, v] : s->items()) {
            if (!v.is_string()) throw Error(ErrorCode::ParseError, "state_descriptions values must be strings");
            d.state_descriptions[fold_label(k)] = v.get<std::string>();
        }
    }
    d.finalize();
    return d;
}

NormalizationDictionary load_dictionary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_dictionary(ss.str());
}

std::string dictionary_to_json(const NormalizationDictionary& d) {
    json j;
    j["schema_version"] = 1;
    j["state_synonyms"] = d.state_synonyms;
    j["cue_synonyms"] = d.cue_synonyms;
    j["au_decodings"] = d.au_decodings;
    json spec = json::object();
    for (auto& [k, v] : d.specificity) spec[k] = specificity_name(v);
    j["specificity"] = spec;
    j["exclusions"] = d.exclusions;
    json ch = json::object();
    for (auto& [k, v] : d.cue_channels) ch[k] = channel_name(v);
    j["cue_channels"] = ch;
    json lv = json::object();
    for (auto& [k, v] : d.actionability.levels) lv[k] = actionability_name(v);
    j["actionability"] = {
        {"levels", lv},
        {"general_level", actionability_name(d.actionability.general_level)},
        {"instrumental_level", actionability_name(d.actionability.instrumental_level)},
        {"default_level", actionability_name(d.actionability.default_level)},
    };
    j["state_descriptions"] = d.state_descriptions;
    return j.dump();
}

// Grammar: AU<digits> ( "+" ["AU"] <digits> )*, case-insensitive, spaces
// allowed around "+".
static bool parse_au_codes(const std::string& code, std::vector<int>& out) {
    auto s = trim(code);
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    auto number = [&](bool need_prefix) -> bool {
        bool has_prefix = i + 1 < s.size() && std::tolower(static_cast<unsigned char>(s[i])) == 'a' &&
                          std::tolower(static_cast<unsigned char>(s[i + 1])) == 'u';
        if (has_prefix) i += 2;
        else if (need_prefix) return false;
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start || i - start > 6) return false;
        out.push_back(std::stoi(s.substr(start, i - start)));
        return true;
    };
    if (!number(true)) return false;
    for (;;) {
        skip_ws();
        if (i == s.size()) return true;
        if (s[i] != '+') return false;
        ++i;
        skip_ws();
        if (!number(false)) return false;
    }
}

bool looks_like_au_code(const std::string& s) {
    std::vector<int> codes;
    return parse_au_codes(s, codes);
}

std::string canonical_au_set(const std::string& code) {
    std::vector<int> codes;
    if (!parse_au_codes(code, codes))
        throw Error(ErrorCode::MalformedAuCode, "'" + code + "' is not an action unit code");
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    std::string out;
    for (int c : codes) {
        if (!out.empty()) out += "+";
        out += "AU" + std::to_string(c);
    }
    return out;
}

AuDecoding decode_action_units(const std::string& code, const NormalizationDictionary& d) {
    AuDecoding r;
    r.code_set = canonical_au_set(code);
    if (auto it = d.au_decodings.find(r.code_set); it != d.au_decodings.end()) {
        r.description = it->second;
        return r;
    }
    auto parts = split(r.code_set, '+');
    std::string desc;
    for (auto& p : parts) {
        if (!desc.empty()) desc += "+";
        if (auto it = d.au_decodings.find(p); it != d.au_decodings.end()) {
            desc += it->second;
        } else {
            desc += p + " (undecoded)";
            r.undecoded = true;
            r.warnings.push_back(p + " has no decoding");
        }
    }
    r.description = desc;
    return r;
}

std::string normalize_state_label(const std::string& raw, const NormalizationDictionary& d) {
    auto key = fold_label(raw);
    if (auto it = d.state_synonyms.find(key); it != d.state_synonyms.end()) return it->second;
    return key;
}

bool is_excluded_cue(const std::string& raw, const NormalizationDictionary& d) {
    auto f = fold_label(raw);
    for (auto& pat : d.exclusions)
        if (f.find(pat) != std::string::npos) return true;
    return false;
}

CueNormalization normalize_cue_label(const std::string& raw, const NormalizationDictionary& d) {
    if (is_excluded_cue(raw, d))
        throw Error(ErrorCode::ExcludedCue, "cue '" + raw + "' matches an exclusion pattern");
    CueNormalization r;
    std::string key;
    // trailing punctuation would otherwise hide a code like "AU4."
    std::string code = looks_like_au_code(raw) ? raw : fold_label(raw);
    if (looks_like_au_code(code)) {
        auto dec = decode_action_units(code, d);
        r.trace.push_back("au-decode:" + dec.code_set);
        r.warnings = dec.warnings;
        key = fold_label(dec.description);
    } else {
        key = fold_label(raw);
    }
    if (auto it = d.cue_synonyms.find(key); it != d.cue_synonyms.end()) {
        r.canonical = it->second;
        r.trace.push_back(fold_label(it->second) == key && r.trace.empty() ? "canonical" : "synonym");
    } else {
        r.canonical = key;
        r.trace.push_back("pass-through");
    }
    if (auto it = d.specificity.find(fold_label(r.canonical)); it != d.specificity.end())
        r.specificity = it->second;
    return r;
}

double reduction_pct(std::size_t raw, std::size_t canonical) {
    if (raw == 0) return 0.0;
    double p = 100.0 * (1.0 - static_cast<double>(canonical) / static_cast<double>(raw));
    return std::round(p * 10.0) / 10.0;
}

NormalizationResult normalize_corpus(const Corpus& c, const NormalizationDictionary& d) {
    NormalizationResult res;
    auto& rep = res.report;
    rep.input_rows = c.mappings.size();
    std::map<std::string, std::set<std::string>> state_variants, cue_variants;
    std::set<std::string> raw_states, raw_cues;
    for (std::size_t i = 0; i < c.mappings.size(); ++i) {
        const auto& m = c.mappings[i];
        std::size_t row = i + 1;
        if (is_excluded_cue(m.raw_cue, d)) {
            ++rep.excluded_count;
            continue;
        }
        NormalizedMapping nm;
        nm.raw = m;
        nm.canonical_state = normalize_state_label(m.raw_state, d);
        nm.normalization_trace.push_back(
            d.state_synonyms.count(fold_label(m.raw_state)) ? "state:synonym" : "state:pass-through");
        CueNormalization cn;
        try {
            cn = normalize_cue_label(m.raw_cue, d);
        } catch (const Error& e) {
            rep.issues.push_back({row, error_code_name(e.code()), e.what()});
            continue;
        }
        for (auto& w : cn.warnings) rep.issues.push_back({row, "au_warning", w});
        nm.canonical_cue = cn.canonical;
        nm.cue_specificity = cn.specificity;
        for (auto& t : cn.trace) nm.normalization_trace.push_back("cue:" + t);
        if (m.channel) {
            nm.channel = *m.channel;
        } else if (auto it = d.cue_channels.find(fold_label(cn.canonical)); it != d.cue_channels.end()) {
            nm.channel = it->second;
            nm.normalization_trace.push_back("channel:dictionary");
        } else {
            ++rep.unresolved_channel_count;
            rep.issues.push_back({row, "unresolved_channel",
                                  "no channel for cue '" + cn.canonical + "'; row not emitted"});
            continue;
        }
        raw_states.insert(m.raw_state);
        raw_cues.insert(m.raw_cue);
        state_variants[nm.canonical_state].insert(m.raw_state);
        cue_variants[nm.canonical_cue].insert(m.raw_cue);
        res.mappings.push_back(std::move(nm));
    }
    rep.emitted_rows = res.mappings.size();
    rep.raw_state_count = raw_states.size();
    rep.canonical_state_count = state_variants.size();
    rep.raw_cue_count = raw_cues.size();
    rep.canonical_cue_count = cue_variants.size();
    rep.state_reduction_pct = reduction_pct(rep.raw_state_count, rep.canonical_state_count);
    rep.cue_reduction_pct = reduction_pct(rep.raw_cue_count, rep.canonical_cue_count);
    auto largest = [](const std::map<std::string, std::set<std::string>>& v) {
        std::pair<std::string, std::size_t> best{"", 0};
        for (auto& [label, vars] : v)
            if (vars.size() > best.second) best = {label, vars.size()};
        return best;
    };
    rep.largest_consolidation = largest(state_variants);
    rep.largest_cue_consolidation = largest(cue_variants);
    return res;
}

Corpus as_corpus(const std::vector<NormalizedMapping>& ms) {
    Corpus c;
    for (const auto& m : ms) {
        RawMapping r = m.raw;
        r.raw_state = m.canonical_state;
        r.raw_cue = m.canonical_cue;
        r.channel = m.channel;
        r.channel_token = channel_name(m.channel);
        c.mappings.push_back(std::move(r));
    }
    c.source_manifest.push_back({"<normalized>", "memory", c.mappings.size()});
    return c;
}

}  // namespace nvsyn
