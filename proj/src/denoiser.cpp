#include "arbor/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "arbor/errors.hpp"
#include "arbor/rng.hpp"

namespace arbor {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

inline double bcast(const std::vector<double>& v, std::size_t d) {
    return v.size() == 1 ? v[0] : v[d];
}

void check_component_dims(const DenoiserSpec& spec, std::size_t dim) {
    for (const auto& c : spec.components) {
        if (c.mean.size() != 1 && c.mean.size() != dim)
            throw std::invalid_argument("denoiser: component mean dimension mismatch");
        if (c.var.size() != 1 && c.var.size() != dim)
            throw std::invalid_argument("denoiser: component variance dimension mismatch");
    }
}

void check_analytic(const DenoiserSpec& spec, double sigma) {
    if (!spec.analytic())
        throw UnsupportedOperation("denoiser: external-table spec has no closed form");
    if (!(sigma > 0.0)) throw std::invalid_argument("denoiser: sigma must be > 0");
    spec.validate();
}

/// Per-component log N(x; mu, var + sigma^2 I), summed over dimensions.
double component_loglik(const MixtureComponent& c, const std::vector<double>& x, double sigma2) {
    double ll = std::log(c.weight);
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double v = bcast(c.var, d) + sigma2;
        const double diff = x[d] - bcast(c.mean, d);
        ll += -0.5 * (kLog2Pi + std::log(v)) - diff * diff / (2.0 * v);
    }
    return ll;
}

}  // namespace

void DenoiserSpec::validate() const {
    if (!analytic()) return;
    if (components.empty()) throw std::invalid_argument("denoiser: no mixture components");
    if (kind == DenoiserKind::AnalyticGaussian && components.size() != 1)
        throw std::invalid_argument("denoiser: analytic-gaussian requires exactly one component");
    double sum = 0.0;
    for (const auto& c : components) {
        if (!(c.weight > 0.0)) throw std::invalid_argument("denoiser: weights must be positive");
        sum += c.weight;
        for (double v : c.var)
            if (!(v > 0.0)) throw std::invalid_argument("denoiser: variances must be positive");
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("denoiser: mixture weights must sum to 1");
}

DenoiserSpec gaussian_spec(double mean, double stddev) {
    DenoiserSpec spec;
    spec.kind = DenoiserKind::AnalyticGaussian;
    spec.components = {MixtureComponent{1.0, {mean}, {stddev * stddev}}};
    return spec;
}

DenoiserSpec gaussian_spec(std::vector<double> mean, double stddev) {
    DenoiserSpec spec;
    spec.kind = DenoiserKind::AnalyticGaussian;
    spec.components = {MixtureComponent{1.0, std::move(mean), {stddev * stddev}}};
    return spec;
}

std::vector<double> analytic_denoise(const DenoiserSpec& spec, const std::vector<double>& x,
                                     double sigma) {
    check_analytic(spec, sigma);
    check_component_dims(spec, x.size());
    const double sigma2 = sigma * sigma;

    // Posterior responsibilities via logsumexp.
    const std::size_t K = spec.components.size();
    std::vector<double> loglik(K);
    double max_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
        loglik[k] = component_loglik(spec.components[k], x, sigma2);
        max_ll = std::max(max_ll, loglik[k]);
    }
    double norm = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        loglik[k] = std::exp(loglik[k] - max_ll);
        norm += loglik[k];
    }

    std::vector<double> out(x.size(), 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        const double resp = loglik[k] / norm;
        const auto& c = spec.components[k];
        for (std::size_t d = 0; d < x.size(); ++d) {
            const double v = bcast(c.var, d);
            const double mu = bcast(c.mean, d);
            out[d] += resp * (v * x[d] + sigma2 * mu) / (v + sigma2);
        }
    }
    return out;
}

std::vector<double> score(const DenoiserSpec& spec, const std::vector<double>& x, double sigma) {
    std::vector<double> g = analytic_denoise(spec, x, sigma);
    const double inv_sigma2 = 1.0 / (sigma * sigma);
    for (std::size_t d = 0; d < x.size(); ++d) g[d] = (g[d] - x[d]) * inv_sigma2;
    return g;
}

std::vector<double> paas(const DenoiserSpec& spec, const std::vector<double>& x, double sigma,
                         int n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("paas: n_samples must be >= 1");
    check_analytic(spec, sigma);

    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> noisy(x.size());
    std::vector<double> acc(x.size(), 0.0);
    for (int s = 0; s < n_samples; ++s) {
        for (std::size_t d = 0; d < x.size(); ++d) noisy[d] = x[d] + sigma * normal(rng);
        const std::vector<double> den = analytic_denoise(spec, noisy, sigma);
        for (std::size_t d = 0; d < x.size(); ++d) acc[d] += den[d] - x[d];
    }
    const double scale = 1.0 / (static_cast<double>(n_samples) * sigma * sigma);
    for (double& v : acc) v *= scale;
    return acc;
}

double log_density_smoothed(const DenoiserSpec& spec, const std::vector<double>& x, double sigma) {
    check_analytic(spec, sigma);
    check_component_dims(spec, x.size());
    const double sigma2 = sigma * sigma;
    double max_ll = -std::numeric_limits<double>::infinity();
    std::vector<double> loglik(spec.components.size());
    for (std::size_t k = 0; k < spec.components.size(); ++k) {
        loglik[k] = component_loglik(spec.components[k], x, sigma2);
        max_ll = std::max(max_ll, loglik[k]);
    }
    double sum = 0.0;
    for (double ll : loglik) sum += std::exp(ll - max_ll);
    return max_ll + std::log(sum);
}

}  // namespace arbor
