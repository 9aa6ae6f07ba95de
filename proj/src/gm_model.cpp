#include "semcom/gm_model.hpp"

#include <cmath>
#include <random>
#include <string>

namespace semcom {

GmModel::GmModel(Eigen::MatrixXd centroids, Eigen::VectorXd covariance_diag, Units units)
    : centroids_(std::move(centroids)), covariance_(std::move(covariance_diag)), units_(units) {
    if (centroids_.rows() < 1) throw ConfigError("GmModel: dims must be at least 1");
    if (centroids_.cols() < 2) throw ConfigError("GmModel: at least two classes are required");
    if (covariance_.size() != centroids_.rows()) {
        throw ConfigError("GmModel: covariance length " + std::to_string(covariance_.size()) +
                          " does not match dims " + std::to_string(centroids_.rows()));
    }
    if (!(covariance_.array() > 0.0).all() || !covariance_.allFinite()) {
        throw ConfigError("GmModel: covariance entries must be positive and finite");
    }
    if (!centroids_.allFinite()) throw ConfigError("GmModel: centroids must be finite");
}

Eigen::VectorXd GmModel::centroid(std::size_t label) const {
    if (label >= num_classes()) {
        throw LookupError("GmModel: label " + std::to_string(label) + " out of range");
    }
    return centroids_.col(static_cast<Eigen::Index>(label));
}

GmModel GmModel::in_quantized_units(double scale) const {
    if (!(scale > 0.0)) throw ConfigError("in_quantized_units: scale must be positive");
    if (units_ == Units::quantized) throw UnitError("model is already in quantized units");
    return GmModel(centroids_ * scale, covariance_ * (scale * scale), Units::quantized);
}

GmModel make_binary_model(std::size_t dims, double amplitude, double variance) {
    if (dims < 1) throw ConfigError("make_binary_model: dims must be at least 1");
    if (amplitude == 0.0 || !std::isfinite(amplitude)) {
        throw ConfigError("make_binary_model: amplitude must be non-zero");
    }
    if (!(variance > 0.0)) throw ConfigError("make_binary_model: variance must be positive");
    const auto d = static_cast<Eigen::Index>(dims);
    Eigen::MatrixXd mu(d, 2);
    mu.col(0).setConstant(amplitude);
    mu.col(1).setConstant(-amplitude);
    return GmModel(std::move(mu), Eigen::VectorXd::Constant(d, variance));
}

GmModel make_ten_class_model(std::size_t dims, double amplitude, double variance) {
    if (dims == 0 || dims % 10 != 0) {
        throw ConfigError("make_ten_class_model: dims must be a positive multiple of 10");
    }
    if (!(variance > 0.0)) throw ConfigError("make_ten_class_model: variance must be positive");
    const auto d = static_cast<Eigen::Index>(dims);
    const Eigen::Index block = d / 10;
    Eigen::MatrixXd mu = Eigen::MatrixXd::Constant(d, 10, amplitude);
    for (Eigen::Index l = 0; l < 10; ++l) {
        mu.block(l * block, l, block, 1).setConstant(-amplitude);
    }
    return GmModel(std::move(mu), Eigen::VectorXd::Constant(d, variance));
}

FeatureVector sample(const GmModel& model, std::size_t label, Rng& rng) {
    std::normal_distribution<double> normal;
    const Eigen::Index d = static_cast<Eigen::Index>(model.dims());
    FeatureVector x(d);
    const auto& mu = model.centroids();
    const auto col = static_cast<Eigen::Index>(label);
    if (label >= model.num_classes()) throw LookupError("sample: label out of range");
    const auto& cov = model.covariance_diag();
    for (Eigen::Index i = 0; i < d; ++i) {
        x[i] = mu(i, col) + std::sqrt(cov[i]) * normal(rng);
    }
    return x;
}

LabeledSample sample_labeled(const GmModel& model, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, model.num_classes() - 1);
    const std::size_t label = pick(rng);
    return {sample(model, label, rng), label};
}

double mahalanobis_squared(const GmModel& model, const FeatureVector& x, std::size_t label,
                           double extra_variance) {
    if (extra_variance < 0.0) throw DomainError("mahalanobis: extra_variance must be >= 0");
    if (x.size() != static_cast<Eigen::Index>(model.dims())) {
        throw DomainError("mahalanobis: feature length does not match model dims");
    }
    const auto col = static_cast<Eigen::Index>(label);
    if (label >= model.num_classes()) throw LookupError("mahalanobis: label out of range");
    return ((x - model.centroids().col(col)).array().square() /
            (model.covariance_diag().array() + extra_variance))
        .sum();
}

double mahalanobis(const GmModel& model, const FeatureVector& x, std::size_t label,
                   double extra_variance) {
    return std::sqrt(mahalanobis_squared(model, x, label, extra_variance));
}

double discriminant_gain(const GmModel& model, std::size_t l, std::size_t l2) {
    if (l == l2) throw DomainError("discriminant_gain: classes must differ");
    return mahalanobis(model, model.centroid(l), l2);
}

FeatureVector average_pool(std::span<const FeatureVector> views) {
    if (views.empty()) throw DomainError("average_pool: no views");
    FeatureVector acc = views.front();
    for (std::size_t i = 1; i < views.size(); ++i) {
        if (views[i].size() != acc.size()) throw DomainError("average_pool: view sizes differ");
        acc += views[i];
    }
    return acc / static_cast<double>(views.size());
}

Eigen::VectorXd posterior(const GmModel& model, const FeatureVector& x, double extra_variance,
                          std::size_t views) {
    if (views < 1) throw DomainError("posterior: views must be at least 1");
    const auto classes = static_cast<Eigen::Index>(model.num_classes());
    Eigen::VectorXd log_lik(classes);
    for (Eigen::Index l = 0; l < classes; ++l) {
        log_lik[l] = -0.5 * static_cast<double>(views) *
                     mahalanobis_squared(model, x, static_cast<std::size_t>(l), extra_variance);
    }
    const double peak = log_lik.maxCoeff();
    Eigen::VectorXd p = (log_lik.array() - peak).exp();
    return p / p.sum();
}

}  // namespace semcom
