#include "nvsyn/cli.hpp"

#include <algorithm>
#include <csignal>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "nvsyn/error.hpp"
#include "nvsyn/render.hpp"
#include "nvsyn/serialization.hpp"
#include "nvsyn/service.hpp"
#include "nvsyn/text.hpp"

namespace nvsyn {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

// repeated flags and ';'-separated lists both work
std::vector<std::string> cue_list(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (auto& r : raw)
        for (auto& piece : split_list(r, ';')) out.push_back(piece);
    return out;
}

CountSample read_sample(const std::string& path) {
    auto text = slurp(path);
    std::vector<long> v;
    auto t = trim(text);
    if (!t.empty() && t.front() == '[') {
        Json j;
        try {
            j = Json::parse(t);
        } catch (const Json::parse_error& e) {
            throw Error(ErrorCode::ParseError, std::string("sample is not valid JSON: ") + e.what());
        }
        for (auto& x : j) {
            if (!x.is_number_integer()) throw Error(ErrorCode::ParseError, "sample entries must be integers");
            v.push_back(x.get<long>());
        }
    } else {
        std::string tok;
        std::size_t row = 0;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            ++row;
            for (char& c : line)
                if (c == ',' || c == '\t') c = ' ';
            std::istringstream ls(line);
            while (ls >> tok) {
                std::size_t used = 0;
                long x = 0;
                try {
                    x = std::stol(tok, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != tok.size())
                    throw Error(ErrorCode::ParseError, "sample value '" + tok + "' is not an integer", static_cast<long>(row));
                v.push_back(x);
            }
        }
    }
    return make_sample(std::move(v));
}

struct Common {
    std::string framework = "framework.json";
    bool json = false;
};

Service* active_service = nullptr;

extern "C" void on_signal(int) {
    if (active_service) active_service->stop();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"nvsyn: evidence framework over nonverbal cue / state mappings"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every verb");

    Common common;
    auto add_framework = [&](CLI::App* sub) {
        sub->add_option("--framework,-f", common.framework, "Framework document (default: $NVSYN_FRAMEWORK or framework.json)")
            ->envname("NVSYN_FRAMEWORK");
    };
    auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", common.json, "Emit JSON instead of text"); };

    // ingest
    std::string corpus_path, format = "auto";
    auto* ingest = app.add_subcommand("ingest", "Validate a corpus file and summarize it");
    ingest->add_option("corpus", corpus_path, "Corpus file (.jsonl or .csv)")->required();
    ingest->add_option("--format", format, "jsonl | csv | auto");
    add_json(ingest);

    // normalize
    std::string dict_path, out_path;
    auto* normalize = app.add_subcommand("normalize", "Normalize labels and report the reduction");
    normalize->add_option("corpus", corpus_path)->required();
    normalize->add_option("--dictionary,-d", dict_path, "Normalization dictionary JSON")->required();
    normalize->add_option("--format", format);
    normalize->add_option("--out,-o", out_path, "Write normalized mappings as JSONL");
    add_json(normalize);

    // build
    FrameworkConfig cfg;
    std::string profile_floor = "R4";
    auto* build = app.add_subcommand("build", "Build the framework document");
    build->add_option("corpus", corpus_path)->required();
    std::string dict_positional;
    build->add_option("dict", dict_positional, "Normalization dictionary JSON (or use -d)");
    build->add_option("--dictionary,-d", dict_path);
    build->add_option("--format", format);
    build->add_option("--out,-o", out_path, "Output path")->required();
    build->add_option("--min-shared", cfg.min_shared, "Shared cues needed for a confusable pair");
    build->add_option("--top-k", cfg.profile.top_k, "Cues per channel in profiles");
    build->add_option("--profile-min-tier", profile_floor, "Weakest tier shown in profiles");
    add_json(build);

    // query
    auto* query = app.add_subcommand("query", "Look things up in a framework");
    query->require_subcommand(1);
    query->fallthrough();
    add_framework(query);
    add_json(query);
    auto* q_states = query->add_subcommand("states", "List state clusters");
    std::string name, channel, specificity, actionability, cue_state, text;
    std::size_t limit = 50, top = 5;
    q_states->add_option("--top", top, "Cues shown per state");
    auto* q_state = query->add_subcommand("state", "Show one state profile");
    q_state->add_option("name", name)->required();
    auto* q_cues = query->add_subcommand("cues", "List cues");
    q_cues->add_option("--channel", channel);
    q_cues->add_option("--specificity", specificity);
    q_cues->add_option("--actionability", actionability);
    q_cues->add_option("--state", cue_state);
    q_cues->add_option("--contains", text);
    q_cues->add_option("--limit", limit);
    auto* q_cue = query->add_subcommand("cue", "Show one cue");
    q_cue->add_option("name", name)->required();
    query->add_subcommand("pairs", "List confusable state pairs");
    query->add_subcommand("cross-tab", "Combined confidence against replication");
    query->add_subcommand("core", "Actionable core summary");
    query->add_subcommand("normalization", "Reduction report stored in the framework");

    // discriminate
    std::string state_a, state_b;
    std::size_t k = 5;
    auto* disc = app.add_subcommand("discriminate", "Discriminating cues for two states");
    disc->add_option("state_a", state_a)->required();
    disc->add_option("state_b", state_b)->required();
    disc->add_option("--k", k, "Rows per column");
    add_framework(disc);
    add_json(disc);

    // infer
    std::vector<std::string> observed, absent, positional;
    std::string min_tier = "exploratory";
    std::size_t suggestions = 5;
    auto* infer = app.add_subcommand("infer", "Rank candidate states for observed cues");
    infer->add_option("cue", positional, "Observed cues");
    infer->add_option("--observed,-o,--cues,-c", observed, "Observed cue (repeatable, or ';'-separated)");
    infer->add_option("--absent,-a", absent, "Cue checked and absent");
    infer->add_option("--min-tier", min_tier, "high-stakes | general | exploratory | R1..R6");
    infer->add_option("--suggestions", suggestions);
    add_framework(infer);
    add_json(infer);

    // session
    std::string store = ".nvsyn-sessions", session_id;
    auto* session = app.add_subcommand("session", "Incremental diagnostic sessions");
    session->require_subcommand(1);
    session->fallthrough();
    add_framework(session);
    add_json(session);
    session->add_option("--store", store, "Directory holding session snapshots");
    auto* s_new = session->add_subcommand("new", "Start a session");
    s_new->add_option("--min-tier", min_tier);
    s_new->add_option("--observed,-o", observed);
    s_new->add_option("--absent,-a", absent);
    auto* s_add = session->add_subcommand("add", "Add observations to a session");
    s_add->add_option("id", session_id)->required();
    s_add->add_option("--observed,-o", observed);
    s_add->add_option("--absent,-a", absent);
    auto* s_show = session->add_subcommand("show", "Show a session");
    s_show->add_option("id", session_id)->required();
    session->add_subcommand("list", "List stored sessions");
    std::string replay_path;
    auto* s_replay = session->add_subcommand("replay", "Replay an exported session snapshot and print its result");
    s_replay->add_option("file", replay_path)->required();

    // fit-powerlaw
    std::string sample_path, plot_path, alternatives = "exponential,lognormal,stretched_exponential";
    std::size_t replicates = 1000;
    std::uint64_t seed = 1;
    long fixed_xmin = 0;
    unsigned threads = 0;
    auto* fit = app.add_subcommand("fit-powerlaw", "Fit a discrete power law to relationship counts");
    fit->add_option("--sample", sample_path, "Integer sample (one per line or JSON array) instead of the framework");
    fit->add_option("--bootstrap,--replicates", replicates, "Bootstrap replicates (0 skips the goodness-of-fit test)");
    fit->add_option("--seed", seed);
    fit->add_option("--threads", threads);
    fit->add_option("--xmin", fixed_xmin, "Fix x_min instead of scanning");
    fit->add_option("--compare,--alternatives", alternatives, "Comma-separated alternatives, or 'none'");
    fit->add_option("--plot", plot_path, "Write CCDF/PDF plot data as TSV");
    add_framework(fit);
    add_json(fit);

    // export
    auto* exp = app.add_subcommand("export", "Verify a framework document and write it back out");
    add_framework(exp);
    exp->add_option("--out,-o", out_path, "Output path (stdout if omitted)");

    // serve
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string sessions_dir;
    auto* serve = app.add_subcommand("serve", "Serve the JSON API");
    add_framework(serve);
    serve->add_option("--host", host);
    serve->add_option("--port", port);
    serve->add_option("--sessions", sessions_dir, "Persist sessions in this directory");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    auto fmt_of = [&](const std::string& path) {
        return format == "auto" ? format_for_path(path) : parse_format(format);
    };
    auto emit = [&](const Json& j) { out << j.dump(2) << "\n"; };

    try {
        if (*ingest) {
            auto c = load_corpus(corpus_path, fmt_of(corpus_path));
            auto v = validate_corpus(c);
            auto s = corpus_stats(c);
            if (common.json) {
                Json j = {{"validation", to_json(v)}, {"stats", to_json(s)}};
                j["stats"]["fraction_2020_2025"] = fraction_in_window(s, 2020, 2025);
                emit(j);
            } else {
                out << render_validation(v, s);
            }
            return v.well_formed() ? 0 : 1;
        }
        if (*normalize) {
            auto c = load_corpus(corpus_path, fmt_of(corpus_path));
            auto d = load_dictionary(dict_path);
            auto r = normalize_corpus(c, d);
            if (!out_path.empty()) {
                std::string lines;
                for (auto& m : r.mappings) lines += to_json(m).dump() + "\n";
                write_file(out_path, lines);
            }
            if (common.json) emit(to_json(r.report));
            else out << render_reduction(r.report);
            return 0;
        }
        if (*build) {
            if (dict_path.empty()) dict_path = dict_positional;
            if (dict_path.empty()) throw Error(ErrorCode::MalformedRequest, "build needs a dictionary");
            auto floor = parse_relationship_tier(profile_floor);
            if (!floor) throw Error(ErrorCode::MalformedRequest, "--profile-min-tier must be R1..R6");
            cfg.profile.min_tier = *floor;
            auto c = load_corpus(corpus_path, fmt_of(corpus_path));
            auto d = load_dictionary(dict_path);
            auto fw = build_framework(c, d, cfg);
            auto doc = export_framework(fw);
            write_file(out_path, doc);
            if (common.json) {
                emit({{"path", out_path},
                      {"framework_hash", framework_hash(doc)},
                      {"states", fw.index.states.size()},
                      {"cues", fw.index.cues.size()},
                      {"relationships", fw.index.relationships.size()},
                      {"normalization", to_json(fw.normalization)}});
            } else {
                out << render_reduction(fw.normalization);
                out << "framework: " << fw.index.states.size() << " states, " << fw.index.cues.size() << " cues, "
                    << fw.index.relationships.size() << " relationships, " << fw.pairs.size() << " confusable pairs\n";
                out << "wrote " << out_path << " (hash " << framework_hash(doc) << ")\n";
            }
            return 0;
        }
        if (*exp) {
            auto text = slurp(common.framework);
            auto fw = import_framework(text);
            auto doc = export_framework(fw);
            if (out_path.empty()) out << doc << "\n";
            else write_file(out_path, doc);
            return 0;
        }
        if (*serve) {
            ServiceOptions so;
            so.session_dir = sessions_dir;
            Service svc(load_framework(common.framework), so);
            active_service = &svc;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            bool ok = svc.serve(host, port, [&](int p) {
                out << "listening on http://" << host << ":" << p << " (framework " << svc.framework_hash() << ")\n";
                out.flush();
            });
            active_service = nullptr;
            if (!ok) throw Error(ErrorCode::IoError, "cannot listen on " + host + ":" + std::to_string(port));
            return 0;
        }

        std::optional<Framework> fw_holder;
        auto fw = [&]() -> const Framework& {
            if (!fw_holder) fw_holder = load_framework(common.framework);
            return *fw_holder;
        };

        if (*query) {
            if (*q_states) {
                if (common.json) {
                    Json a = Json::array();
                    for (auto& c : fw().clusters) a.push_back(to_json(c));
                    emit({{"states", a}});
                } else {
                    out << render_clusters(fw().clusters, top);
                }
            } else if (*q_state) {
                auto s = fw().resolve_state(name);
                if (common.json) emit({{"cluster", to_json(*fw().cluster(s))}, {"profile", to_json(*fw().profile(s))}});
                else out << render_cluster(*fw().cluster(s), 0) << render_profile(*fw().profile(s));
            } else if (*q_cue) {
                auto c = fw().resolve_cue(name);
                if (common.json) emit(to_json(*fw().cue(c)));
                else out << render_cue(*fw().cue(c));
            } else if (*q_cues) {
                QueryParams q;
                if (!channel.empty()) q.emplace("channel", channel);
                if (!specificity.empty()) q.emplace("specificity", specificity);
                if (!actionability.empty()) q.emplace("actionability", actionability);
                if (!cue_state.empty()) q.emplace("state", cue_state);
                if (!text.empty()) q.emplace("q", text);
                q.emplace("limit", std::to_string(limit));
                Service svc(fw());
                auto r = svc.handle("GET", "/v1/cues", q, "");
                auto j = Json::parse(r.body);
                if (r.status != 200) {
                    err << "error: " << j["code"].get<std::string>() << ": "
                        << j["message"].get<std::string>() << "\n";
                    return r.status >= 500 ? 2 : 1;
                }
                if (common.json) {
                    emit(j);
                } else {
                    for (auto& c : j["cues"])
                        out << c["cue"].get<std::string>() << "\t" << c["paper_count"].get<std::size_t>() << "\t"
                            << c["channel"].get<std::string>() << "\t" << c["component_tier"].get<std::string>() << "\n";
                    out << j["cues"].size() << " of " << j["total"].get<std::size_t>() << " cues\n";
                }
            } else if (query->got_subcommand("pairs")) {
                if (common.json) {
                    Json a = Json::array();
                    for (auto& p : fw().pairs) a.push_back(to_json(p));
                    emit({{"pairs", a}});
                } else {
                    for (auto& p : fw().pairs) {
                        char buf[32];
                        std::snprintf(buf, sizeof buf, "%.3f", p.jaccard);
                        out << p.state_a << "\t" << p.state_b << "\t" << p.shared_cues.size() << " shared\t" << buf << "\n";
                    }
                }
            } else if (query->got_subcommand("cross-tab")) {
                auto t = cross_tab_confidence_vs_replication(fw().index);
                if (common.json) emit(to_json(t));
                else out << render_cross_tab(t);
            } else if (query->got_subcommand("core")) {
                auto r = actionable_core(fw().index);
                if (common.json) {
                    auto j = to_json(r);
                    j["tier_distribution"] = to_json(tier_distribution(fw().index));
                    emit(j);
                } else {
                    out << render_core(r);
                }
            } else if (query->got_subcommand("normalization")) {
                if (common.json) emit(to_json(fw().normalization));
                else out << render_reduction(fw().normalization);
            }
            return 0;
        }
        if (*disc) {
            auto a = fw().resolve_state(state_a), b = fw().resolve_state(state_b);
            auto pr = make_pair_report(fw().index, a, b);
            auto d = discriminative_cues(pr, fw().index);
            if (common.json) {
                auto j = to_json(pr);
                j["discriminators"] = to_json(d);
                emit(j);
            } else {
                out << render_discriminators(pr, d, k);
            }
            return 0;
        }
        if (*infer) {
            InferenceOptions opt;
            opt.min_tier = parse_min_tier(min_tier);
            opt.suggestions = suggestions;
            observed.insert(observed.end(), positional.begin(), positional.end());
            auto obs = normalize_observation(cue_list(observed), cue_list(absent), fw().dictionary);
            auto r = run_inference(obs, fw(), opt);
            if (common.json) emit(to_json(r));
            else out << render_inference(r);
            return 0;
        }
        if (*session) {
            if (*s_replay) {
                auto rec = parse_request_json(slurp(replay_path));
                auto s = session_from_record(rec, fw());
                if (common.json) emit(to_json(s.history.back()));
                else out << render_inference(s.history.back());
                return 0;
            }
            ServiceOptions so;
            so.session_dir = store;
            Service svc(fw(), so);
            HttpResponse r;
            if (*s_new) {
                Json body = {{"options", {{"min_tier", min_tier}}}, {"observed", cue_list(observed)}, {"absent", cue_list(absent)}};
                r = svc.handle("POST", "/v1/sessions", QueryParams{}, body.dump());
            } else if (*s_add) {
                Json body = {{"observed", cue_list(observed)}, {"absent", cue_list(absent)}};
                r = svc.handle("POST", "/v1/sessions/" + session_id + "/observations", QueryParams{}, body.dump());
            } else if (*s_show) {
                r = svc.handle("GET", "/v1/sessions/" + session_id, QueryParams{}, "");
            } else {
                r = svc.handle("GET", "/v1/sessions", QueryParams{}, "");
            }
            auto j = Json::parse(r.body);
            if (r.status >= 400) {
                err << "error: " << j["code"].get<std::string>() << ": " << j["message"].get<std::string>()
                    << "\n";
                return r.status >= 500 ? 2 : 1;
            }
            if (common.json) {
                emit(j);
            } else if (j.contains("sessions")) {
                for (auto& id : j["sessions"]) out << id.get<std::string>() << "\n";
            } else {
                auto id = j["session_id"].get<std::string>();
                out << "session " << id << "\n";
                const Json& cur = j.contains("result") ? j["result"] : j["current"];
                for (auto& c : cur["candidates"])
                    out << "  " << c["state"].get<std::string>() << "\t" << c["score"].get<double>() << "\t"
                        << c["confidence_label"].get<std::string>() << "\n";
                if (!cur["mixed_state"].is_null()) out << "  mixed state: " << cur["mixed_state"]["label"].get<std::string>() << "\n";
                for (auto& s2 : cur["suggested_next_cues"]) out << "  check: " << s2["cue"].get<std::string>() << "\n";
            }
            return 0;
        }
        if (*fit) {
            CountSample sample = sample_path.empty() ? relationship_count_distribution(fw().index) : read_sample(sample_path);
            auto f = fixed_xmin > 0 ? fit_alpha(sample, fixed_xmin) : select_xmin(sample);
            std::optional<GoodnessOfFit> gof;
            if (replicates > 0) gof = bootstrap_gof(sample, f, replicates, seed, threads);
            std::vector<LikelihoodRatioResult> lrs;
            Json comps = Json::array();
            if (fold_label(alternatives) != "none") {
                for (auto& a : split_list(alternatives, ',')) {
                    auto alt = parse_alternative(a);
                    try {
                        lrs.push_back(likelihood_ratio_test(sample, f, alt));
                        comps.push_back(to_json(lrs.back()));
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::AlternativeFitFailure) throw;
                        err << "warning: " << alternative_name(alt) << ": " << e.what() << "\n";
                        comps.push_back({{"model_b", alternative_name(alt)}, {"error", e.what()}});
                    }
                }
            }
            auto plot = plot_data(sample, f);
            if (!plot_path.empty()) write_file(plot_path, plot_data_tsv(plot));
            if (common.json) {
                Json j = {{"fit", to_json(f)}, {"comparisons", comps}, {"log_bins", to_json(plot)["log_bins"]}};
                j["goodness_of_fit"] = gof ? to_json(*gof) : Json(nullptr);
                emit(j);
            } else {
                out << render_fit(f, gof ? &*gof : nullptr, lrs);
            }
            return 0;
        }
    } catch (const Error& e) {
        auto api = to_api_error(e);
        err << "error: " << api.machine_code << ": " << e.what();
        if (e.row() > 0) err << " (row " << e.row() << ")";
        err << "\n";
        return is_caller_fault(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        err << "error: Internal: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, out, err);
}

}  // namespace nvsyn
