#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nvsyn/evidence.hpp"

namespace nvsyn {

struct CountSample {
    std::vector<long> values;  // all >= 1
    std::size_t n() const { return values.size(); }
};

// throws DomainError on values < 1
CountSample make_sample(std::vector<long> values);
CountSample relationship_count_distribution(const EvidenceIndex& idx);

// Hurwitz zeta, s > 1, q > 0
double hurwitz_zeta(double s, double q);

struct PowerLawFit {
    double alpha = 0;
    double alpha_se = 0;  // asymptotic (alpha - 1) / sqrt(n_tail)
    long x_min = 1;
    double ks_distance = 0;
    std::size_t n_tail = 0;
    std::size_t n = 0;
    double log_likelihood = 0;
};

double powerlaw_log_likelihood(double alpha, long x_min, std::size_t n_tail, double sum_log);
// fitted CDF P(X <= x) for x >= x_min
double powerlaw_cdf(double alpha, long x_min, long x);

PowerLawFit fit_alpha(const CountSample& s, long x_min);
PowerLawFit select_xmin(const CountSample& s);

struct GoodnessOfFit {
    double p_value = 0;
    std::size_t replicates = 0;   // requested
    std::size_t completed = 0;    // replicates that produced a fit
    std::size_t failed = 0;
    double observed_ks = 0;
    double ks_mean = 0, ks_min = 0, ks_max = 0, ks_median = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> failures;  // "replicate i: reason"
};

// threads == 0 picks hardware concurrency
GoodnessOfFit bootstrap_gof(const CountSample& s, const PowerLawFit& fit, std::size_t replicates, std::uint64_t seed,
                            unsigned threads = 0);

enum class Alternative { Exponential, Lognormal, StretchedExponential };
const char* alternative_name(Alternative a);
Alternative parse_alternative(const std::string& s);

// A fitted discrete distribution on the integers >= x_min.
struct TailModel {
    std::string name;
    long x_min = 1;
    std::vector<double> params;
    std::vector<std::string> param_names;
    // log pmf at each tail value, same order as passed to fit
    std::vector<double> log_pmf;
    double log_likelihood = 0;
};

TailModel powerlaw_model(const std::vector<long>& tail, long x_min, double alpha);
// throws AlternativeFitFailure
TailModel fit_alternative(const std::vector<long>& tail, long x_min, Alternative a);

struct LikelihoodRatioResult {
    std::string model_a = "power_law", model_b;
    double R = 0;                 // normalized; > 0 favors model_a
    double log_likelihood_ratio = 0;
    double p_value = 1;
    std::vector<std::string> alternative_param_names;
    std::vector<double> alternative_params;
};

LikelihoodRatioResult compare_models(const TailModel& a, const TailModel& b);
LikelihoodRatioResult likelihood_ratio_test(const CountSample& s, const PowerLawFit& fit, Alternative alt);

std::vector<long> tail_of(const CountSample& s, long x_min);

// inverse-CDF sampler for the discrete power law above x_min
class PowerLawSampler {
public:
    PowerLawSampler(double alpha, long x_min);
    template <class Rng>
    long operator()(Rng& g) const {
        return draw(unit(g));
    }
    long draw(double u) const;
    template <class Rng>
    static double unit(Rng& g) {
        return static_cast<double>(g() >> 11) * 0x1.0p-53;
    }

private:
    double alpha_;
    long x_min_;
    double z_;
    std::vector<double> cdf_;
};

CountSample generate_powerlaw_sample(double alpha, long x_min, std::size_t n, std::uint64_t seed);

struct PlotPoint {
    long x;
    double empirical_ccdf, fitted_ccdf, empirical_pdf, fitted_pdf;
};

struct LogBin {
    double lo, hi, center, density;
};

struct PlotData {
    std::vector<PlotPoint> points;
    std::vector<LogBin> log_bins;
};

PlotData plot_data(const CountSample& s, const PowerLawFit& fit);
std::string plot_data_tsv(const PlotData& p);

}  // namespace nvsyn
