#include <doctest.h>

#include <filesystem>
#include <unistd.h>

#include "nvsyn/cli.hpp"
#include "nvsyn/serialization.hpp"
#include "seed_fixture.hpp"

using namespace nvsyn;
namespace fs = std::filesystem;

namespace {

struct Run {
    int rc;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int rc = run_cli(args, out, err);
    return {rc, out.str(), err.str()};
}

struct Workspace {
    fs::path dir;
    std::string fw, corpus, dict;
    Workspace() {
        dir = fs::temp_directory_path() / ("nvsyn-cli-" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
        corpus = std::string(NVSYN_SOURCE_DIR) + "/data/seed/seed_corpus.jsonl";
        dict = std::string(NVSYN_SOURCE_DIR) + "/data/seed/dictionary.json";
        fw = (dir / "framework.json").string();
        save_framework(seed_framework(), fw);
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string file(const std::string& name, const std::string& text) const {
        auto p = (dir / name).string();
        std::ofstream(p) << text;
        return p;
    }
};

const Workspace& ws() {
    static Workspace w;
    return w;
}

}  // namespace

TEST_CASE("usage and help") {
    CHECK(cli({}).rc == 1);
    CHECK(cli({"--help"}).rc == 0);
    CHECK(cli({"frobnicate"}).rc == 1);
    CHECK(cli({"discriminate", "confusion"}).rc == 1);
}

TEST_CASE("ingest") {
    auto r = cli({"ingest", ws().corpus});
    CHECK(r.rc == 0);
    auto j = cli({"ingest", ws().corpus, "--json"});
    REQUIRE(j.rc == 0);
    auto doc = Json::parse(j.out);
    CHECK(doc["stats"]["mappings"] == 6759);
    CHECK(doc["validation"]["errors"].empty());
    auto bad = ws().file("bad.jsonl", "{\"paper_id\":\"p\",\"raw_cue\":\"x\"}\n");
    auto b = cli({"ingest", bad});
    CHECK(b.rc == 1);
    CHECK(b.err.find("row 1") != std::string::npos);
    CHECK(cli({"ingest", "/nonexistent.jsonl"}).rc == 2);
}

TEST_CASE("normalize and build") {
    auto out = (ws().dir / "norm.jsonl").string();
    auto n = cli({"normalize", ws().corpus, "-d", ws().dict, "-o", out, "--json"});
    REQUIRE(n.rc == 0);
    CHECK(Json::parse(n.out)["emitted_rows"] == 6755);
    CHECK(fs::file_size(out) > 0);
    auto fw = (ws().dir / "built.json").string();
    auto b = cli({"build", ws().corpus, ws().dict, "-o", fw});
    REQUIRE_MESSAGE(b.rc == 0, b.err);
    CHECK(import_framework(read_text_abs(fw)).index.relationships.size() == 4449);
    CHECK(cli({"build", ws().corpus, "-o", fw}).rc == 1);
}

TEST_CASE("query verbs") {
    auto& f = ws().fw;
    auto s = cli({"query", "state", "confusion", "-f", f});
    REQUIRE(s.rc == 0);
    CHECK(s.out.find("292 papers") != std::string::npos);
    CHECK(s.out.find("Facial\tAU4 brow lowerer (35)") != std::string::npos);
    auto missing = cli({"query", "state", "nosuchstate", "-f", f});
    CHECK(missing.rc == 1);
    CHECK(missing.err.find("UnknownState") != std::string::npos);
    CHECK(cli({"query", "cue", "furrowed brow", "-f", f}).rc == 0);
    CHECK(cli({"query", "cue", "qwfpgj", "-f", f}).rc == 1);
    auto cues = cli({"query", "cues", "--state", "confusion", "--limit", "2", "--json", "-f", f});
    REQUIRE(cues.rc == 0);
    CHECK(Json::parse(cues.out)["cues"].size() == 2);
    CHECK(cli({"query", "states", "-f", f}).rc == 0);
    CHECK(cli({"query", "pairs", "-f", f}).rc == 0);
    CHECK(cli({"query", "cross-tab", "-f", f}).rc == 0);
    CHECK(cli({"query", "core", "-f", f}).rc == 0);
    CHECK(cli({"query", "normalization", "-f", f}).rc == 0);
    CHECK(cli({"query", "state", "confusion", "-f", "/nonexistent/fw.json"}).rc == 2);
}

TEST_CASE("discriminate") {
    auto r = cli({"discriminate", "confusion", "frustration", "-f", ws().fw});
    REQUIRE(r.rc == 0);
    CHECK(r.out == read_text("tests/data/discriminate_confusion_frustration.golden"));
}

TEST_CASE("infer") {
    auto r = cli({"infer", "--cues", "furrowed brow;repeated fixation on elements;scratching head", "--json", "-f", ws().fw});
    REQUIRE(r.rc == 0);
    auto j = Json::parse(r.out);
    CHECK(j["candidates"][0]["state"] == "confusion");
    auto text = cli({"infer", "furrowed brow", "sighing", "-f", ws().fw});
    REQUIRE(text.rc == 0);
    CHECK(text.out.find("frustration") != std::string::npos);
    CHECK(cli({"infer", "--cues", "frown", "--absent", "frown", "-f", ws().fw}).rc == 1);
    CHECK(cli({"infer", "--cues", "frown", "--min-tier", "lenient", "-f", ws().fw}).rc == 1);
}

TEST_CASE("session verbs and replay") {
    auto store = (ws().dir / "sessions").string();
    auto n = cli({"session", "new", "--observed", "furrowed brow", "--json", "--store", store, "-f", ws().fw});
    REQUIRE_MESSAGE(n.rc == 0, n.err);
    auto id = Json::parse(n.out)["session_id"].get<std::string>();
    auto a = cli({"session", "add", id, "--observed", "sighing", "--json", "--store", store, "-f", ws().fw});
    REQUIRE(a.rc == 0);
    auto result = Json::parse(a.out)["result"];
    CHECK(result["candidates"][0]["state"] == "frustration");
    auto show = cli({"session", "show", id, "--json", "--store", store, "-f", ws().fw});
    REQUIRE(show.rc == 0);
    auto exported = ws().file("session.json", show.out);
    auto rep = cli({"session", "replay", exported, "--json", "-f", ws().fw});
    REQUIRE(rep.rc == 0);
    CHECK(Json::parse(rep.out) == result);
    auto list = cli({"session", "list", "--store", store, "-f", ws().fw});
    CHECK(list.out.find(id) != std::string::npos);
    CHECK(cli({"session", "show", "nope", "--store", store, "-f", ws().fw}).rc == 1);
}

TEST_CASE("fit-powerlaw") {
    auto sample = ws().file("sample.txt", "1\n1\n2\n3\n3\n4\n7\n12\n1\n2\n5\n9\n1\n1\n2\n");
    auto plot = (ws().dir / "plot.tsv").string();
    auto r = cli({"fit-powerlaw", "--sample", sample, "--bootstrap", "10", "--seed", "3", "--compare", "exponential",
                  "--plot", plot, "--json"});
    REQUIRE_MESSAGE(r.rc == 0, r.err);
    auto j = Json::parse(r.out);
    CHECK(j["fit"]["alpha"].get<double>() > 1.0);
    CHECK(j["goodness_of_fit"]["replicates"] == 10);
    CHECK(j["comparisons"].size() == 1);
    CHECK(fs::file_size(plot) > 0);
    auto again = cli({"fit-powerlaw", "--sample", sample, "--bootstrap", "10", "--seed", "3", "--compare", "exponential", "--json"});
    CHECK(Json::parse(again.out)["goodness_of_fit"] == j["goodness_of_fit"]);
    auto fw = cli({"fit-powerlaw", "-f", ws().fw, "--bootstrap", "0", "--compare", "none"});
    CHECK(fw.rc == 0);
    auto bad = ws().file("bad.txt", "1\n0\n");
    CHECK(cli({"fit-powerlaw", "--sample", bad}).rc == 1);
    auto flat = ws().file("flat.txt", "2\n2\n2\n");
    CHECK(cli({"fit-powerlaw", "--sample", flat, "--bootstrap", "0"}).rc == 1);
}

TEST_CASE("export verifies the document") {
    auto out = (ws().dir / "exported.json").string();
    CHECK(cli({"export", "-f", ws().fw, "-o", out}).rc == 0);
    CHECK(read_text_abs(out) == read_text_abs(ws().fw));
    auto j = Json::parse(read_text_abs(ws().fw));
    j["levels"]["clusters"][0]["paper_count"] = 1;
    auto tampered = ws().file("tampered.json", j.dump());
    CHECK(cli({"export", "-f", tampered}).rc == 1);
}
