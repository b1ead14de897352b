#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "arbor/camera.hpp"
#include "arbor/image.hpp"

namespace arbor {

enum class DenoiserKind { AnalyticGaussian, AnalyticMixture, ExternalTable };

/// One Gaussian component in data space. `mean` and `var` of size 1 broadcast
/// over any data dimension; otherwise they must match the data vector length.
struct MixtureComponent {
    double weight = 1.0;
    std::vector<double> mean{0.0};
    std::vector<double> var{1.0};  // diagonal variance s^2
};

/// A view the 3D-aware prior is conditioned on.
struct ReferenceView {
    Image image;
    CameraPose pose;
};

/// Pluggable denoiser D(x; sigma). Analytic kinds carry an explicit Gaussian
/// mixture prior and admit a closed-form posterior mean; external-table is an
/// interface placeholder that analytic operations reject.
struct DenoiserSpec {
    DenoiserKind kind = DenoiserKind::AnalyticGaussian;
    std::vector<MixtureComponent> components{MixtureComponent{}};
    std::optional<std::string> genus;        // text conditioning (2D prior)
    std::shared_ptr<ReferenceView> ref_view; // viewpoint conditioning (3D prior)
    std::string table_path;                  // external-table payload

    bool analytic() const { return kind != DenoiserKind::ExternalTable; }
    /// Throws invalid_argument on non-positive weights, weight sum != 1, or
    /// non-positive variances.
    void validate() const;
};

/// Single isotropic Gaussian prior with scalar (broadcast) mean.
DenoiserSpec gaussian_spec(double mean, double stddev);
DenoiserSpec gaussian_spec(std::vector<double> mean, double stddev);

/// Posterior mean E[x0 | x0 + sigma*n = x] under the spec's mixture prior.
std::vector<double> analytic_denoise(const DenoiserSpec& spec, const std::vector<double>& x,
                                     double sigma);

/// (D(x; sigma) - x) / sigma^2; equals the gradient of the sigma-smoothed
/// log-density for analytic specs.
std::vector<double> score(const DenoiserSpec& spec, const std::vector<double>& x, double sigma);

/// Monte-Carlo average over n ~ N(0, I) of (D(x + sigma*n; sigma) - x) / sigma^2.
/// Deterministic for a fixed seed.
std::vector<double> paas(const DenoiserSpec& spec, const std::vector<double>& x, double sigma,
                         int n_samples, std::uint64_t seed);

/// log of the sigma-smoothed mixture density at x.
double log_density_smoothed(const DenoiserSpec& spec, const std::vector<double>& x, double sigma);

}  // namespace arbor
