#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "semcom/errors.hpp"
#include "semcom/random.hpp"

namespace semcom {

using FeatureVector = Eigen::VectorXd;

/// Which scale a model's centroids and covariance are expressed in. Analytical
/// bounds that mix in channel noise only accept quantized units.
enum class Units { feature, quantized };

/// Gaussian mixture with uniform priors and a shared diagonal covariance.
///
/// Immutable after construction. Centroids are stored column-wise
/// (dims x num_classes).
class GmModel {
public:
    GmModel(Eigen::MatrixXd centroids, Eigen::VectorXd covariance_diag,
            Units units = Units::feature);

    std::size_t dims() const { return static_cast<std::size_t>(centroids_.rows()); }
    std::size_t num_classes() const { return static_cast<std::size_t>(centroids_.cols()); }
    Units units() const { return units_; }

    const Eigen::MatrixXd& centroids() const { return centroids_; }
    Eigen::VectorXd centroid(std::size_t label) const;
    const Eigen::VectorXd& covariance_diag() const { return covariance_; }

    /// Same mixture expressed in quantized units: centroids * scale, covariance * scale^2.
    GmModel in_quantized_units(double scale) const;

private:
    Eigen::MatrixXd centroids_;
    Eigen::VectorXd covariance_;
    Units units_;
};

struct LabeledSample {
    FeatureVector features;
    std::size_t label = 0;
};

/// Two clusters at (+a, ..., +a) and (-a, ..., -a) with covariance variance * I.
GmModel make_binary_model(std::size_t dims, double amplitude, double variance);

/// Ten clusters; class l has entries [w*l, w*(l+1)) at -amplitude and the rest at
/// +amplitude, where w = dims / 10. Identity covariance scaled by `variance`.
GmModel make_ten_class_model(std::size_t dims, double amplitude = 1.0, double variance = 1.0);

/// One draw from N(mu_label, C).
FeatureVector sample(const GmModel& model, std::size_t label, Rng& rng);

LabeledSample sample_labeled(const GmModel& model, Rng& rng);

/// Mahalanobis distance to centroid `label` under C + extra_variance * I.
double mahalanobis(const GmModel& model, const FeatureVector& x, std::size_t label,
                   double extra_variance = 0.0);

/// Squared Mahalanobis distance; avoids the square root in inner loops.
double mahalanobis_squared(const GmModel& model, const FeatureVector& x, std::size_t label,
                           double extra_variance = 0.0);

/// Pairwise discriminant gain g(l, l2) = d_C(mu_l, mu_l2).
double discriminant_gain(const GmModel& model, std::size_t l, std::size_t l2);

/// Elementwise mean of equally sized views.
FeatureVector average_pool(std::span<const FeatureVector> views);

/// Class posterior under uniform priors with covariance (C + extra_variance * I) / views.
Eigen::VectorXd posterior(const GmModel& model, const FeatureVector& x, double extra_variance = 0.0,
                          std::size_t views = 1);

}  // namespace semcom
