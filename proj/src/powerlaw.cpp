#include "nvsyn/powerlaw.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "nvsyn/error.hpp"
#include "nvsyn/text.hpp"

namespace nvsyn {

CountSample make_sample(std::vector<long> values) {
    for (long v : values)
        if (v < 1) throw Error(ErrorCode::DomainError, "count sample values must be >= 1, got " + std::to_string(v));
    return CountSample{std::move(values)};
}

CountSample relationship_count_distribution(const EvidenceIndex& idx) {
    CountSample s;
    s.values.reserve(idx.relationships.size());
    for (auto& [k, r] : idx.relationships) s.values.push_back(static_cast<long>(r.papers));
    return s;
}

double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0)) throw Error(ErrorCode::DomainError, "hurwitz_zeta needs s > 1");
    if (!(q > 0.0)) throw Error(ErrorCode::DomainError, "hurwitz_zeta needs q > 0");
    // direct sum up to a = q + N >= 10, then Euler-Maclaurin
    static const double bern[] = {1.0 / 12.0,
                                  -1.0 / 720.0,
                                  1.0 / 30240.0,
                                  -1.0 / 1209600.0,
                                  1.0 / 47900160.0,
                                  -691.0 / 1307674368000.0,
                                  1.0 / 74724249600.0,
                                  -3617.0 / 10670622842880000.0};
    double sum = 0.0;
    double a = q;
    while (a < 10.0) {
        sum += std::pow(a, -s);
        a += 1.0;
    }
    double a_pow = std::pow(a, -s);
    double tail = a * a_pow / (s - 1.0) + 0.5 * a_pow;
    double fac = s * a_pow / a;  // s * a^(-s-1)
    double inv_a2 = 1.0 / (a * a);
    for (int j = 0; j < 8; ++j) {
        double term = bern[j] * fac;
        tail += term;
        if (std::fabs(term) < 1e-17 * (sum + tail)) break;
        double k = 2.0 * j + 1.0;
        fac *= (s + k) * (s + k + 1.0) * inv_a2;
    }
    return sum + tail;
}

double powerlaw_log_likelihood(double alpha, long x_min, std::size_t n_tail, double sum_log) {
    return -static_cast<double>(n_tail) * std::log(hurwitz_zeta(alpha, static_cast<double>(x_min))) - alpha * sum_log;
}

double powerlaw_cdf(double alpha, long x_min, long x) {
    if (x < x_min) return 0.0;
    return 1.0 - hurwitz_zeta(alpha, static_cast<double>(x + 1)) / hurwitz_zeta(alpha, static_cast<double>(x_min));
}

namespace {

constexpr double kAlphaLo = 1.01, kAlphaHi = 6.0, kAlphaTol = 1e-6;

template <class F>
double golden_max(F f, double lo, double hi, double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > tol) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

// distinct sorted values with multiplicities and suffix sums
struct Prepared {
    std::vector<long> x;
    std::vector<std::size_t> count;
    std::vector<std::size_t> suffix_n;
    std::vector<double> suffix_log;

    explicit Prepared(std::vector<long> v) {
        std::sort(v.begin(), v.end());
        for (std::size_t i = 0; i < v.size();) {
            std::size_t j = i;
            while (j < v.size() && v[j] == v[i]) ++j;
            x.push_back(v[i]);
            count.push_back(j - i);
            i = j;
        }
        suffix_n.assign(x.size() + 1, 0);
        suffix_log.assign(x.size() + 1, 0.0);
        for (std::size_t i = x.size(); i-- > 0;) {
            suffix_n[i] = suffix_n[i + 1] + count[i];
            suffix_log[i] = suffix_log[i + 1] + static_cast<double>(count[i]) * std::log(static_cast<double>(x[i]));
        }
    }
    // first distinct index with x >= x_min
    std::size_t start(long x_min) const {
        return static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), x_min) - x.begin());
    }
};

// sup over integers >= x_min of |F_emp - F_fit|, tail given from index i0
double ks_tail(const Prepared& p, std::size_t i0, double alpha, long x_min) {
    double n = static_cast<double>(p.suffix_n[i0]);
    double z = hurwitz_zeta(alpha, static_cast<double>(x_min));
    long cur = x_min;
    double S = z;  // S = zeta(alpha, cur)
    auto advance = [&](long to) {
        if (to == cur) return;
        if (to - cur <= 64) {
            for (long k = cur; k < to; ++k) S -= std::pow(static_cast<double>(k), -alpha);
        } else {
            S = hurwitz_zeta(alpha, static_cast<double>(to));
        }
        cur = to;
    };
    double cum = 0, d = 0;
    for (std::size_t i = i0; i < p.x.size(); ++i) {
        long v = p.x[i];
        if (v - 1 >= x_min && (i == i0 || v - 1 > p.x[i - 1])) {
            advance(v);
            double model = 1.0 - S / z;
            d = std::max(d, std::fabs(cum / n - model));
        }
        cum += static_cast<double>(p.count[i]);
        advance(v + 1);
        double model = 1.0 - S / z;
        d = std::max(d, std::fabs(cum / n - model));
    }
    return std::min(1.0, d);
}

PowerLawFit fit_prepared(const Prepared& p, std::size_t i0, long x_min, std::size_t n_total) {
    PowerLawFit f;
    f.x_min = x_min;
    f.n = n_total;
    f.n_tail = p.suffix_n[i0];
    if (f.n_tail < 2)
        throw Error(ErrorCode::InsufficientTail, "tail above x_min=" + std::to_string(x_min) + " has fewer than 2 values");
    if (p.x.size() - i0 < 2)
        throw Error(ErrorCode::DegenerateTail, "all tail values equal; likelihood unbounded");
    double sum_log = p.suffix_log[i0];
    auto L = [&](double a) { return powerlaw_log_likelihood(a, x_min, f.n_tail, sum_log); };
    f.alpha = golden_max(L, kAlphaLo, kAlphaHi, kAlphaTol);
    f.log_likelihood = L(f.alpha);
    f.alpha_se = (f.alpha - 1.0) / std::sqrt(static_cast<double>(f.n_tail));
    f.ks_distance = ks_tail(p, i0, f.alpha, x_min);
    return f;
}

PowerLawFit select_prepared(const Prepared& p, std::size_t n_total) {
    auto candidates = [&](std::size_t min_tail) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i + 1 < p.x.size(); ++i)
            if (p.suffix_n[i] >= min_tail) out.push_back(i);
        return out;
    };
    auto cand = candidates(10);
    if (cand.empty()) cand = candidates(2);
    if (cand.empty())
        throw Error(ErrorCode::InsufficientData, "x_min scan needs at least two distinct values");
    std::optional<PowerLawFit> best;
    for (auto i : cand) {
        auto f = fit_prepared(p, i, p.x[i], n_total);
        if (!best || f.ks_distance < best->ks_distance) best = f;
    }
    return *best;
}

}  // namespace

std::vector<long> tail_of(const CountSample& s, long x_min) {
    std::vector<long> t;
    for (long v : s.values)
        if (v >= x_min) t.push_back(v);
    return t;
}

PowerLawFit fit_alpha(const CountSample& s, long x_min) {
    if (x_min < 1) throw Error(ErrorCode::DomainError, "x_min must be >= 1");
    Prepared p(s.values);
    return fit_prepared(p, p.start(x_min), x_min, s.n());
}

PowerLawFit select_xmin(const CountSample& s) {
    Prepared p(s.values);
    return select_prepared(p, s.n());
}

PowerLawSampler::PowerLawSampler(double alpha, long x_min) : alpha_(alpha), x_min_(x_min) {
    if (!(alpha > 1.0)) throw Error(ErrorCode::DomainError, "power-law sampler needs alpha > 1");
    if (x_min < 1) throw Error(ErrorCode::DomainError, "power-law sampler needs x_min >= 1");
    z_ = hurwitz_zeta(alpha, static_cast<double>(x_min));
    double acc = 0;
    const std::size_t cap = std::size_t{1} << 20;
    for (long x = x_min; cdf_.size() < cap; ++x) {
        acc += std::pow(static_cast<double>(x), -alpha) / z_;
        cdf_.push_back(acc);
        if (1.0 - acc < 1e-7) break;
    }
}

long PowerLawSampler::draw(double u) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it != cdf_.end()) return x_min_ + static_cast<long>(it - cdf_.begin());
    // beyond the table: smallest x with zeta(alpha, x + 1) < (1 - u) z
    double target = (1.0 - u) * z_;
    long lo = x_min_ + static_cast<long>(cdf_.size()) - 1;  // CDF(lo) <= u
    long hi = lo + 1;
    const long limit = std::numeric_limits<long>::max() / 4;
    while (hurwitz_zeta(alpha_, static_cast<double>(hi + 1)) >= target) {
        lo = hi;
        if (hi >= limit / 2) return limit;
        hi *= 2;
    }
    while (hi - lo > 1) {
        long mid = lo + (hi - lo) / 2;
        if (hurwitz_zeta(alpha_, static_cast<double>(mid + 1)) < target) hi = mid;
        else lo = mid;
    }
    return hi;
}

CountSample generate_powerlaw_sample(double alpha, long x_min, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorCode::DomainError, "sample size must be >= 1");
    PowerLawSampler sampler(alpha, x_min);
    std::mt19937_64 g(seed);
    CountSample s;
    s.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.values.push_back(sampler(g));
    return s;
}

GoodnessOfFit bootstrap_gof(const CountSample& s, const PowerLawFit& fit, std::size_t replicates, std::uint64_t seed,
                            unsigned threads) {
    if (replicates < 1) throw Error(ErrorCode::DomainError, "replicates must be >= 1");
    if (s.n() == 0 || fit.n_tail == 0) throw Error(ErrorCode::InsufficientTail, "empty tail");
    GoodnessOfFit g;
    g.replicates = replicates;
    g.observed_ks = fit.ks_distance;
    g.seed = seed;
    std::vector<long> below;
    std::size_t n_tail = 0;
    for (long v : s.values) {
        if (v < fit.x_min) below.push_back(v);
        else ++n_tail;
    }
    const std::size_t n = s.n();
    const double p_tail = static_cast<double>(n_tail) / static_cast<double>(n);
    PowerLawSampler sampler(fit.alpha, fit.x_min);

    std::vector<double> ks(replicates, -1.0);
    std::vector<std::string> err(replicates);
    auto run_one = [&](std::size_t r) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
        std::mt19937_64 rng(seq);
        std::vector<long> v;
        v.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double u = PowerLawSampler::unit(rng);
            if (below.empty() || u < p_tail) {
                v.push_back(sampler(rng));
            } else {
                auto k = static_cast<std::size_t>(PowerLawSampler::unit(rng) * static_cast<double>(below.size()));
                v.push_back(below[std::min(k, below.size() - 1)]);
            }
        }
        try {
            Prepared p(std::move(v));
            ks[r] = select_prepared(p, n).ks_distance;
        } catch (const Error& e) {
            err[r] = e.what();
        }
    };
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, replicates));
    if (workers <= 1) {
        for (std::size_t r = 0; r < replicates; ++r) run_one(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t r; (r = next.fetch_add(1)) < replicates;) run_one(r);
            });
        for (auto& t : pool) t.join();
    }
    std::vector<double> done;
    std::size_t ge = 0;
    for (std::size_t r = 0; r < replicates; ++r) {
        if (ks[r] < 0) {
            ++g.failed;
            g.failures.push_back("replicate " + std::to_string(r) + ": " + err[r]);
            continue;
        }
        done.push_back(ks[r]);
        if (ks[r] >= g.observed_ks) ++ge;
    }
    g.completed = done.size();
    if (!done.empty()) {
        g.p_value = static_cast<double>(ge) / static_cast<double>(done.size());
        g.ks_mean = std::accumulate(done.begin(), done.end(), 0.0) / static_cast<double>(done.size());
        std::sort(done.begin(), done.end());
        g.ks_min = done.front();
        g.ks_max = done.back();
        std::size_t m = done.size() / 2;
        g.ks_median = done.size() % 2 ? done[m] : 0.5 * (done[m - 1] + done[m]);
    }
    return g;
}

const char* alternative_name(Alternative a) {
    switch (a) {
    case Alternative::Exponential: return "exponential";
    case Alternative::Lognormal: return "lognormal";
    case Alternative::StretchedExponential: return "stretched_exponential";
    }
    return "";
}

Alternative parse_alternative(const std::string& s) {
    auto f = fold_label(s);
    if (f == "exponential" || f == "exp") return Alternative::Exponential;
    if (f == "lognormal") return Alternative::Lognormal;
    if (f == "stretched_exponential" || f == "stretched-exponential" || f == "stretched exponential" ||
        f == "weibull")
        return Alternative::StretchedExponential;
    throw Error(ErrorCode::MalformedRequest, "unknown alternative '" + s +
                                                 "' (expected exponential, lognormal, stretched_exponential)");
}

TailModel powerlaw_model(const std::vector<long>& tail, long x_min, double alpha) {
    TailModel m;
    m.name = "power_law";
    m.x_min = x_min;
    m.params = {alpha};
    m.param_names = {"alpha"};
    double lz = std::log(hurwitz_zeta(alpha, static_cast<double>(x_min)));
    for (long x : tail) {
        double lp = -alpha * std::log(static_cast<double>(x)) - lz;
        m.log_pmf.push_back(lp);
        m.log_likelihood += lp;
    }
    return m;
}

namespace {

constexpr long kDirectTerms = 500;

double log_sum_exp(const std::vector<double>& v) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) mx = std::max(mx, x);
    if (!std::isfinite(mx)) return mx;
    double s = 0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

// log normalizer of a discretized density: direct sum over [x_min, K) plus
// a midpoint-rule integral from K - 1/2 to infinity
template <class LogF>
double log_norm(long x_min, LogF logf, double log_tail_integral) {
    std::vector<double> terms;
    terms.reserve(kDirectTerms + 1);
    for (long x = x_min; x < x_min + kDirectTerms; ++x) terms.push_back(logf(static_cast<double>(x)));
    if (std::isfinite(log_tail_integral)) terms.push_back(log_tail_integral);
    return log_sum_exp(terms);
}

struct Distinct {
    std::vector<double> x, lx;
    std::vector<double> w;
    double n = 0, sum_lx = 0, sum_lx2 = 0;
};

Distinct distinct_of(const std::vector<long>& tail) {
    Prepared p(tail);
    Distinct d;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        double x = static_cast<double>(p.x[i]), c = static_cast<double>(p.count[i]);
        d.x.push_back(x);
        d.lx.push_back(std::log(x));
        d.w.push_back(c);
        d.n += c;
        d.sum_lx += c * std::log(x);
        d.sum_lx2 += c * std::log(x) * std::log(x);
    }
    return d;
}

double lognormal_log_norm(long x_min, double mu, double sigma) {
    double K = static_cast<double>(x_min + kDirectTerms) - 0.5;
    double z = (std::log(K) - mu) / sigma;
    double q = 0.5 * std::erfc(z / std::sqrt(2.0));
    double lt = q > 0 ? std::log(sigma * std::sqrt(2.0 * M_PI)) + std::log(q) : -INFINITY;
    return log_norm(
        x_min, [&](double x) { double l = std::log(x) - mu; return -std::log(x) - l * l / (2 * sigma * sigma); }, lt);
}

double stretched_log_norm(long x_min, double lambda, double beta) {
    double K = static_cast<double>(x_min + kDirectTerms) - 0.5;
    double lt = -lambda * std::pow(K, beta) - std::log(lambda * beta);
    return log_norm(
        x_min, [&](double x) { return (beta - 1) * std::log(x) - lambda * std::pow(x, beta); }, lt);
}

struct NmProblem {
    const Distinct* d;
    long x_min;
    Alternative kind;
};

double negative_ll(const NmProblem& p, double a, double b) {
    const auto& d = *p.d;
    double ll;
    if (p.kind == Alternative::Lognormal) {
        double mu = a, sigma = std::exp(b);
        if (!std::isfinite(sigma) || sigma < 1e-6 || sigma > 1e6 || std::fabs(mu) > 1e6) return 1e300;
        double lz = lognormal_log_norm(p.x_min, mu, sigma);
        ll = -d.sum_lx - (d.sum_lx2 - 2 * mu * d.sum_lx + d.n * mu * mu) / (2 * sigma * sigma) - d.n * lz;
    } else {
        double lambda = std::exp(a), beta = std::exp(b);
        if (!std::isfinite(lambda) || !std::isfinite(beta) || lambda < 1e-300 || beta < 1e-4 || beta > 20)
            return 1e300;
        double lz = stretched_log_norm(p.x_min, lambda, beta);
        double s = 0;
        for (std::size_t i = 0; i < d.x.size(); ++i) s += d.w[i] * std::pow(d.x[i], beta);
        ll = (beta - 1) * d.sum_lx - lambda * s - d.n * lz;
    }
    return std::isfinite(ll) ? -ll : 1e300;
}

double gsl_objective(const gsl_vector* v, void* params) {
    return negative_ll(*static_cast<const NmProblem*>(params), gsl_vector_get(v, 0), gsl_vector_get(v, 1));
}

std::pair<double, double> nelder_mead(const NmProblem& prob, double a0, double b0) {
    gsl_multimin_function f{&gsl_objective, 2, const_cast<NmProblem*>(&prob)};
    gsl_vector* x = gsl_vector_alloc(2);
    gsl_vector* step = gsl_vector_alloc(2);
    gsl_vector_set(x, 0, a0);
    gsl_vector_set(x, 1, b0);
    gsl_vector_set_all(step, 0.5);
    gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
    gsl_multimin_fminimizer_set(m, &f, x, step);
    for (int it = 0; it < 5000; ++it) {
        if (gsl_multimin_fminimizer_iterate(m)) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-9) == GSL_SUCCESS) break;
    }
    std::pair<double, double> best{gsl_vector_get(m->x, 0), gsl_vector_get(m->x, 1)};
    gsl_multimin_fminimizer_free(m);
    gsl_vector_free(step);
    gsl_vector_free(x);
    return best;
}

std::once_flag gsl_handler_once;

}  // namespace

TailModel fit_alternative(const std::vector<long>& tail, long x_min, Alternative alt) {
    std::call_once(gsl_handler_once, [] { gsl_set_error_handler_off(); });
    if (tail.size() < 2) throw Error(ErrorCode::AlternativeFitFailure, "alternative fit needs at least 2 tail values");
    TailModel m;
    m.name = alternative_name(alt);
    m.x_min = x_min;
    auto d = distinct_of(tail);
    if (alt == Alternative::Exponential) {
        double mean = d.n > 0 ? 0 : 0;
        for (std::size_t i = 0; i < d.x.size(); ++i) mean += d.w[i] * d.x[i];
        mean /= d.n;
        double excess = mean - static_cast<double>(x_min);
        if (!(excess > 0)) throw Error(ErrorCode::AlternativeFitFailure, "exponential fit: tail has no spread");
        double lambda = std::log1p(1.0 / excess);
        m.params = {lambda};
        m.param_names = {"lambda"};
        double lc = std::log(-std::expm1(-lambda));
        for (long x : tail) {
            double lp = lc - lambda * static_cast<double>(x - x_min);
            m.log_pmf.push_back(lp);
            m.log_likelihood += lp;
        }
        return m;
    }
    NmProblem prob{&d, x_min, alt};
    std::pair<double, double> best;
    double best_val = INFINITY;
    std::vector<std::pair<double, double>> starts;
    if (alt == Alternative::Lognormal) {
        double mu = d.sum_lx / d.n;
        double var = std::max(d.sum_lx2 / d.n - mu * mu, 1e-4);
        starts = {{mu, 0.5 * std::log(var)}, {0.0, std::log(2.0)}, {mu - 2.0, std::log(2.0 * std::sqrt(var))}};
    } else {
        for (double beta : {0.5, 0.2, 1.0}) {
            double s = 0;
            for (std::size_t i = 0; i < d.x.size(); ++i) s += d.w[i] * std::pow(d.x[i], beta);
            starts.push_back({std::log(d.n / s), std::log(beta)});
        }
    }
    for (auto [a0, b0] : starts) {
        auto r = nelder_mead(prob, a0, b0);
        double v = negative_ll(prob, r.first, r.second);
        if (v < best_val) {
            best_val = v;
            best = r;
        }
    }
    if (!(best_val < 1e299)) throw Error(ErrorCode::AlternativeFitFailure, std::string(m.name) + " fit did not converge");
    double lz;
    if (alt == Alternative::Lognormal) {
        double mu = best.first, sigma = std::exp(best.second);
        m.params = {mu, sigma};
        m.param_names = {"mu", "sigma"};
        lz = lognormal_log_norm(x_min, mu, sigma);
        for (long x : tail) {
            double l = std::log(static_cast<double>(x)) - mu;
            double lp = -std::log(static_cast<double>(x)) - l * l / (2 * sigma * sigma) - lz;
            m.log_pmf.push_back(lp);
            m.log_likelihood += lp;
        }
    } else {
        double lambda = std::exp(best.first), beta = std::exp(best.second);
        m.params = {lambda, beta};
        m.param_names = {"lambda", "beta"};
        lz = stretched_log_norm(x_min, lambda, beta);
        for (long x : tail) {
            double xd = static_cast<double>(x);
            double lp = (beta - 1) * std::log(xd) - lambda * std::pow(xd, beta) - lz;
            m.log_pmf.push_back(lp);
            m.log_likelihood += lp;
        }
    }
    return m;
}

LikelihoodRatioResult compare_models(const TailModel& a, const TailModel& b) {
    if (a.log_pmf.size() != b.log_pmf.size() || a.log_pmf.empty())
        throw Error(ErrorCode::DomainError, "models must be evaluated on the same non-empty tail");
    LikelihoodRatioResult r;
    r.model_a = a.name;
    r.model_b = b.name;
    r.alternative_param_names = b.param_names;
    r.alternative_params = b.params;
    std::size_t n = a.log_pmf.size();
    std::vector<double> l(n);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        l[i] = a.log_pmf[i] - b.log_pmf[i];
        sum += l[i];
    }
    double mean = sum / static_cast<double>(n);
    double var = 0;
    for (double v : l) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    r.log_likelihood_ratio = sum;
    if (var > 0) {
        r.R = sum / std::sqrt(static_cast<double>(n) * var);
        r.p_value = std::erfc(std::fabs(r.R) / std::sqrt(2.0));
    } else {
        r.R = 0;
        r.p_value = 1;
    }
    return r;
}

LikelihoodRatioResult likelihood_ratio_test(const CountSample& s, const PowerLawFit& fit, Alternative alt) {
    auto tail = tail_of(s, fit.x_min);
    auto pl = powerlaw_model(tail, fit.x_min, fit.alpha);
    auto other = fit_alternative(tail, fit.x_min, alt);
    return compare_models(pl, other);
}

PlotData plot_data(const CountSample& s, const PowerLawFit& fit) {
    auto tail = tail_of(s, fit.x_min);
    if (tail.empty()) throw Error(ErrorCode::InsufficientTail, "no values at or above x_min");
    Prepared p(tail);
    PlotData out;
    double n = static_cast<double>(tail.size());
    double z = hurwitz_zeta(fit.alpha, static_cast<double>(fit.x_min));
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        double xd = static_cast<double>(p.x[i]);
        out.points.push_back({p.x[i], static_cast<double>(p.suffix_n[i]) / n,
                              hurwitz_zeta(fit.alpha, xd) / z, static_cast<double>(p.count[i]) / n,
                              std::pow(xd, -fit.alpha) / z});
    }
    // log bins [x_min * 2^k, x_min * 2^(k+1))
    long lo = fit.x_min;
    std::size_t i = 0;
    while (i < p.x.size()) {
        long hi = lo * 2;
        double c = 0;
        while (i < p.x.size() && p.x[i] < hi) c += static_cast<double>(p.count[i++]);
        double width = static_cast<double>(hi - lo);
        out.log_bins.push_back({static_cast<double>(lo), static_cast<double>(hi),
                                std::sqrt(static_cast<double>(lo) * static_cast<double>(hi - 1)), c / (n * width)});
        lo = hi;
    }
    return out;
}

std::string plot_data_tsv(const PlotData& p) {
    std::string out = "x\tempirical_ccdf\tfitted_ccdf\tempirical_pdf\tfitted_pdf\n";
    char buf[160];
    for (auto& pt : p.points) {
        std::snprintf(buf, sizeof buf, "%ld\t%.10g\t%.10g\t%.10g\t%.10g\n", pt.x, pt.empirical_ccdf, pt.fitted_ccdf,
                      pt.empirical_pdf, pt.fitted_pdf);
        out += buf;
    }
    return out;
}

}  // namespace nvsyn
