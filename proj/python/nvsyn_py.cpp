// Thin binding: everything crosses as JSON text, python/nvsyn decodes it.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nvsyn/error.hpp"
#include "nvsyn/framework.hpp"
#include "nvsyn/inference.hpp"
#include "nvsyn/powerlaw.hpp"
#include "nvsyn/serialization.hpp"
#include "nvsyn/service.hpp"

namespace py = pybind11;
using namespace nvsyn;

namespace {

struct Handle {
    std::shared_ptr<Service> svc;
    const Framework& fw() const { return svc->framework(); }
};

Handle wrap(Framework fw) { return Handle{std::make_shared<Service>(std::move(fw))}; }

std::string dump(const Json& j) { return j.dump(); }

std::string infer(const Handle& h, const std::vector<std::string>& observed, const std::vector<std::string>& absent,
                  const std::string& min_tier) {
    InferenceOptions opt;
    if (!min_tier.empty()) opt.min_tier = parse_min_tier(min_tier);
    auto obs = normalize_observation(observed, absent, h.fw().dictionary);
    return dump(to_json(run_inference(obs, h.fw(), opt)));
}

std::string fit(const CountSample& s, std::size_t replicates, std::uint64_t seed, long x_min) {
    auto f = x_min > 0 ? fit_alpha(s, x_min) : select_xmin(s);
    Json out = {{"fit", to_json(f)}};
    if (replicates > 0) out["goodness_of_fit"] = to_json(bootstrap_gof(s, f, replicates, seed));
    Json cmp = Json::array();
    for (auto a : {Alternative::Exponential, Alternative::Lognormal, Alternative::StretchedExponential}) {
        try {
            cmp.push_back(to_json(likelihood_ratio_test(s, f, a)));
        } catch (const Error& e) {
            cmp.push_back({{"error", to_json(to_api_error(e))}});
        }
    }
    out["comparisons"] = cmp;
    return dump(out);
}

}  // namespace

PYBIND11_MODULE(_nvsyn, m) {
    static py::exception<Error> err(m, "NvsynError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(err.ptr(), (std::string(error_code_name(e.code())) + ": " + e.what()).c_str());
        }
    });

    py::class_<Handle>(m, "Framework")
        .def_static(
            "build",
            [](const std::string& corpus, const std::string& dictionary) {
                auto c = load_corpus(corpus, format_for_path(corpus));
                return wrap(build_framework(c, load_dictionary(dictionary)));
            },
            py::arg("corpus"), py::arg("dictionary"))
        .def_static("load", [](const std::string& path) { return wrap(load_framework(path)); }, py::arg("path"))
        .def_static("from_json", [](const std::string& doc) { return wrap(import_framework(doc)); }, py::arg("document"))
        .def("save", [](const Handle& h, const std::string& path) { save_framework(h.fw(), path); }, py::arg("path"))
        .def("export", [](const Handle& h) { return export_framework(h.fw()); })
        .def_property_readonly("hash", [](const Handle& h) { return h.svc->framework_hash(); })
        .def("states_json", [](const Handle& h) {
            Json a = Json::array();
            for (auto& c : h.fw().clusters) a.push_back(to_json(c));
            return dump(a);
        })
        .def("profile_json", [](const Handle& h, const std::string& state) {
            auto name = h.fw().resolve_state(state);
            return dump(to_json(*h.fw().profile(name)));
        }, py::arg("state"))
        .def("pairs_json", [](const Handle& h) {
            Json a = Json::array();
            for (auto& p : h.fw().pairs) a.push_back(to_json(p));
            return dump(a);
        })
        .def("infer_json", &infer, py::arg("observed"), py::arg("absent") = std::vector<std::string>{},
             py::arg("min_tier") = "")
        .def("fit_powerlaw_json", [](const Handle& h, std::size_t replicates, std::uint64_t seed, long x_min) {
            return fit(relationship_count_distribution(h.fw().index), replicates, seed, x_min);
        }, py::arg("replicates") = 0, py::arg("seed") = 1, py::arg("x_min") = 0)
        .def("handle", [](const Handle& h, const std::string& method, const std::string& target, const std::string& body) {
            py::gil_scoped_release nogil;
            auto r = h.svc->handle(method, target, body);
            return std::make_pair(r.status, r.body);
        }, py::arg("method"), py::arg("target"), py::arg("body") = "");

    m.def("fit_powerlaw_json", [](std::vector<long> values, std::size_t replicates, std::uint64_t seed, long x_min) {
        return fit(make_sample(std::move(values)), replicates, seed, x_min);
    }, py::arg("values"), py::arg("replicates") = 0, py::arg("seed") = 1, py::arg("x_min") = 0);
    m.def("generate_powerlaw_sample", [](double alpha, long x_min, std::size_t n, std::uint64_t seed) {
        return generate_powerlaw_sample(alpha, x_min, n, seed).values;
    }, py::arg("alpha"), py::arg("x_min"), py::arg("n"), py::arg("seed"));
}
