#include <doctest.h>

#include <cmath>
#include <functional>
#include <gsl/gsl_sf_zeta.h>
#include <random>

#include "nvsyn/error.hpp"
#include "nvsyn/powerlaw.hpp"
#include "seed_fixture.hpp"

using namespace nvsyn;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Internal;
}

CountSample geometric_tail(double p, long x_min, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::geometric_distribution<long> geo(p);
    std::vector<long> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(x_min + geo(g));
    return make_sample(std::move(v));
}

}  // namespace

TEST_CASE("hurwitz zeta against gsl") {
    double worst = 0;
    for (double s : {1.01, 1.1, 1.5, 2.0, 2.5, 3.0, 4.5, 6.0, 10.0})
        for (double q : {0.3, 1.0, 1.5, 2.0, 3.0, 7.0, 9.99, 10.0, 25.0, 120.0, 5000.0}) {
            double want = gsl_sf_hzeta(s, q);
            worst = std::max(worst, std::fabs(hurwitz_zeta(s, q) - want) / want);
        }
    CHECK(worst < 1e-10);
    CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-12));
    CHECK(code_of([] { hurwitz_zeta(1.0, 1.0); }) == ErrorCode::DomainError);
    CHECK(code_of([] { hurwitz_zeta(2.0, 0.0); }) == ErrorCode::DomainError);
}

TEST_CASE("samples reject values below one") {
    CHECK(code_of([] { make_sample({3, 0, 2}); }) == ErrorCode::DomainError);
    CHECK(code_of([] { generate_powerlaw_sample(1.0, 1, 10, 1); }) == ErrorCode::DomainError);
    CHECK(code_of([] { generate_powerlaw_sample(2.5, 0, 10, 1); }) == ErrorCode::DomainError);
}

TEST_CASE("relationship counts") {
    EvidenceIndex idx;
    idx.relationships[{"a", "x"}].papers = 1;
    idx.relationships[{"a", "y"}].papers = 5;
    idx.relationships[{"b", "x"}].papers = 1;
    auto s = relationship_count_distribution(idx);
    std::sort(s.values.begin(), s.values.end());
    CHECK(s.values == std::vector<long>{1, 1, 5});
    auto seed = relationship_count_distribution(seed_framework().index);
    CHECK(seed.n() == 4449);
}

TEST_CASE("generator") {
    auto one = generate_powerlaw_sample(2.5, 3, 1, 9);
    REQUIRE(one.n() == 1);
    CHECK(one.values[0] >= 3);
    CHECK(generate_powerlaw_sample(2.5, 3, 500, 4).values == generate_powerlaw_sample(2.5, 3, 500, 4).values);

    auto s = generate_powerlaw_sample(3.0, 1, 100000, 17);
    double mean = 0;
    for (long v : s.values) mean += static_cast<double>(v);
    mean /= static_cast<double>(s.n());
    double want = hurwitz_zeta(2.0, 1.0) / hurwitz_zeta(3.0, 1.0);
    CHECK(std::fabs(mean - want) / want < 0.05);

    // empirical CDF against the analytic one
    std::map<long, std::size_t> hist;
    for (long v : s.values) ++hist[v];
    double worst = 0, cum = 0;
    for (auto [x, c] : hist) {
        cum += static_cast<double>(c) / static_cast<double>(s.n());
        worst = std::max(worst, std::fabs(cum - powerlaw_cdf(3.0, 1, x)));
    }
    CHECK(worst < 0.01);
}

TEST_CASE("fit recovers the exponent and sits at a maximum") {
    auto s = generate_powerlaw_sample(2.5, 3, 10000, 5);
    auto f = fit_alpha(s, 3);
    CHECK(f.alpha > 2.40);
    CHECK(f.alpha < 2.60);
    CHECK(f.n_tail == 10000);
    CHECK(f.alpha_se == doctest::Approx((f.alpha - 1) / 100.0));
    CHECK(f.ks_distance >= 0);
    CHECK(f.ks_distance <= 1);
    double sum_log = 0;
    for (long v : s.values) sum_log += std::log(static_cast<double>(v));
    double at = powerlaw_log_likelihood(f.alpha, 3, f.n_tail, sum_log);
    CHECK(at == doctest::Approx(f.log_likelihood));
    CHECK(at >= powerlaw_log_likelihood(f.alpha + 1e-3, 3, f.n_tail, sum_log));
    CHECK(at >= powerlaw_log_likelihood(f.alpha - 1e-3, 3, f.n_tail, sum_log));

    auto sel = select_xmin(s);
    CHECK(sel.x_min >= 2);
    CHECK(sel.x_min <= 4);
}

TEST_CASE("fit errors") {
    CHECK(code_of([] { fit_alpha(make_sample({4, 4, 4, 1}), 2); }) == ErrorCode::DegenerateTail);
    CHECK(code_of([] { fit_alpha(make_sample({1, 2, 9}), 5); }) == ErrorCode::InsufficientTail);
    CHECK(code_of([] { select_xmin(make_sample({3, 3, 3})); }) == ErrorCode::InsufficientData);
    CHECK(code_of([] { select_xmin(make_sample({})); }) == ErrorCode::InsufficientData);
    // two distinct values: the only usable cutoff is the smaller one
    auto f = select_xmin(make_sample({1, 1, 1, 2, 2}));
    CHECK(f.x_min == 1);
    CHECK(f.alpha_se > 0);
}

TEST_CASE("ks is measured against the discrete model") {
    auto s = make_sample({1, 1, 1, 2, 3, 5, 8});
    auto f = fit_alpha(s, 1);
    // brute-force supremum over values and the points just below them
    double worst = 0;
    for (long x = 1; x <= 8; ++x) {
        double emp = 0;
        for (long v : s.values) emp += v <= x;
        emp /= 7.0;
        worst = std::max(worst, std::fabs(emp - powerlaw_cdf(f.alpha, 1, x)));
    }
    CHECK(f.ks_distance == doctest::Approx(worst).epsilon(1e-9));
}

TEST_CASE("bootstrap is reproducible and thread-count independent") {
    auto s = generate_powerlaw_sample(2.5, 2, 800, 3);
    auto f = select_xmin(s);
    auto serial = bootstrap_gof(s, f, 24, 99, 1);
    auto parallel = bootstrap_gof(s, f, 24, 99, 4);
    CHECK(serial.p_value == parallel.p_value);
    CHECK(serial.ks_mean == parallel.ks_mean);
    CHECK(serial.ks_median == parallel.ks_median);
    CHECK(serial.completed + serial.failed == 24);
    CHECK(serial.p_value >= 0);
    CHECK(serial.p_value <= 1);
    auto other = bootstrap_gof(s, f, 24, 100, 1);
    CHECK(other.ks_mean != serial.ks_mean);
    auto single = bootstrap_gof(s, f, 1, 5, 1);
    CHECK((single.p_value == 0.0 || single.p_value == 1.0));
    CHECK(code_of([&] { bootstrap_gof(s, f, 0, 1); }) == ErrorCode::DomainError);
}

TEST_CASE("likelihood ratio direction and antisymmetry") {
    auto pl = generate_powerlaw_sample(2.5, 1, 5000, 8);
    auto fpl = fit_alpha(pl, 1);
    auto vs_exp = likelihood_ratio_test(pl, fpl, Alternative::Exponential);
    CHECK(vs_exp.R > 0);
    CHECK(vs_exp.p_value < 0.01);
    CHECK(vs_exp.model_b == "exponential");

    auto ex = geometric_tail(0.3, 3, 5000, 8);
    auto fex = fit_alpha(ex, 3);
    auto r = likelihood_ratio_test(ex, fex, Alternative::Exponential);
    CHECK(r.R < 0);
    CHECK(r.p_value < 0.01);

    auto tail = tail_of(pl, 1);
    auto a = powerlaw_model(tail, 1, fpl.alpha);
    for (auto alt : {Alternative::Exponential, Alternative::Lognormal, Alternative::StretchedExponential}) {
        auto b = fit_alternative(tail, 1, alt);
        auto ab = compare_models(a, b), ba = compare_models(b, a);
        CHECK(ab.R == doctest::Approx(-ba.R));
        CHECK(ab.p_value == doctest::Approx(ba.p_value));
        double total = 0;
        for (double lp : b.log_pmf) total += lp;
        CHECK(total == doctest::Approx(b.log_likelihood));
    }
    CHECK(parse_alternative("stretched-exponential") == Alternative::StretchedExponential);
    CHECK_THROWS_AS(parse_alternative("weibull-ish"), Error);
}

TEST_CASE("alternative fits are well formed") {
    std::vector<long> tail{2, 3, 3, 4, 7, 9, 15, 40};
    for (auto alt : {Alternative::Exponential, Alternative::Lognormal, Alternative::StretchedExponential}) {
        auto m = fit_alternative(tail, 2, alt);
        CHECK(std::isfinite(m.log_likelihood));
        CHECK(m.log_likelihood < 0);
        CHECK(m.params.size() == m.param_names.size());
    }
}

TEST_CASE("plot data") {
    auto s = make_sample({1, 2});
    auto f = fit_alpha(s, 1);
    auto p = plot_data(s, f);
    REQUIRE(p.points.size() == 2);
    CHECK(p.points[0].x == 1);
    CHECK(p.points[0].empirical_ccdf == 1.0);
    CHECK(p.points[1].empirical_ccdf == 0.5);
    CHECK(p.points[0].empirical_pdf + p.points[1].empirical_pdf == doctest::Approx(1.0));
    CHECK(p.points[0].fitted_ccdf == doctest::Approx(1.0));
    auto tsv = plot_data_tsv(p);
    CHECK(tsv.rfind("x\tempirical_ccdf\tfitted_ccdf\tempirical_pdf\tfitted_pdf\n", 0) == 0);

    auto big = generate_powerlaw_sample(2.5, 1, 5000, 12);
    auto fb = fit_alpha(big, 1);
    double worst = 0;
    for (auto& pt : plot_data(big, fb).points) worst = std::max(worst, std::fabs(pt.empirical_ccdf - pt.fitted_ccdf));
    CHECK(worst <= fb.ks_distance + 1e-12);
}
