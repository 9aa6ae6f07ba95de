#include "semcom/margin_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "semcom/errors.hpp"
#include "semcom/feature_channel.hpp"
#include "semcom/numerics.hpp"

namespace semcom {

namespace {

double checked_noise(const GmModel& model, Variance v, const char* what) {
    if (!(v.value >= 0.0) || !std::isfinite(v.value)) {
        throw DomainError(std::string(what) + ": noise variance must be finite and >= 0");
    }
    if (v.value > 0.0 && v.units != model.units()) {
        throw UnitError(std::string(what) + ": noise variance and covariance use different units");
    }
    return v.value;
}

void require_quantized(const GmModel& model, const char* what) {
    if (model.units() != Units::quantized) {
        throw UnitError(std::string(what) + ": model must be expressed in quantized units");
    }
}

void check_plane(const GmModel& model, const Hyperplane& h) {
    if (h.w.size() != static_cast<Eigen::Index>(model.dims())) {
        throw DomainError("hyperplane dimension does not match model");
    }
}

double wcw(const GmModel& model, const Hyperplane& h, double extra = 0.0) {
    return (h.w.array().square() * (model.covariance_diag().array() + extra)).sum();
}

// Pieces shared by the accuracy bounds: s(mu)^2, w^T C w and sigma_delta^2.
struct BoundTerms {
    double s2;
    double a;
    double noise;
};

BoundTerms bound_terms(const GmModel& model, const Hyperplane& h, int bits, double p_b,
                       const char* what) {
    require_quantized(model, what);
    check_plane(model, h);
    const double s = score(h, model.centroid(h.positive));
    return {s * s, wcw(model, h), error_variance(bits, p_b)};
}

double multiview_gap(const BoundTerms& t, double views) {
    if (t.noise == 0.0) return 0.0;
    const double denom = 2.0 * t.noise + t.a;
    return std::sqrt(t.noise / denom) * std::exp(-views * t.s2 / (2.0 * denom));
}

double multiview_bound(const BoundTerms& t, double views) { return 1.0 - multiview_gap(t, views); }

void check_xi(double xi, const char* what) {
    if (!(xi > 0.0 && xi < 1.0)) throw DomainError(std::string(what) + ": xi must lie in (0, 1)");
}

}  // namespace

Hyperplane hyperplane_between(const GmModel& model, std::size_t l, std::size_t l2) {
    if (l == l2) throw DomainError("hyperplane_between: classes must differ");
    const Eigen::VectorXd mu = model.centroid(l);
    const Eigen::VectorXd mu2 = model.centroid(l2);
    Eigen::VectorXd dir = (mu - mu2).cwiseQuotient(model.covariance_diag());
    const double norm = dir.norm();
    if (!(norm > 0.0)) throw DomainError("hyperplane_between: coincident centroids");
    Hyperplane h;
    h.w = dir / norm;
    h.b = -0.5 * h.w.dot(mu + mu2);
    h.positive = l;
    h.negative = l2;
    return h;
}

double score(const Hyperplane& h, const FeatureVector& x) {
    if (h.w.size() != x.size()) throw DomainError("score: dimension mismatch");
    return h.w.dot(x) + h.b;
}

std::size_t classify_label(const GmModel& model, const FeatureVector& x, Variance noise_var) {
    const double extra = checked_noise(model, noise_var, "classify_label");
    if (x.size() != static_cast<Eigen::Index>(model.dims())) {
        throw DomainError("classify_label: feature length does not match model dims");
    }
    const Eigen::ArrayXd inv = 1.0 / (model.covariance_diag().array() + extra);
    std::size_t champion = 0;
    double best = ((x - model.centroids().col(0)).array().square() * inv).sum();
    for (std::size_t j = 1; j < model.num_classes(); ++j) {
        const double d2 =
            ((x - model.centroids().col(static_cast<Eigen::Index>(j))).array().square() * inv).sum();
        if (d2 < best) {
            best = d2;
            champion = j;
        }
    }
    return champion;
}

ClassificationOutcome classify_ovo(const GmModel& model, const FeatureVector& x, Variance noise_var,
                                   std::size_t views) {
    const double extra = checked_noise(model, noise_var, "classify_ovo");
    if (views < 1) throw DomainError("classify_ovo: views must be >= 1");
    if (x.size() != static_cast<Eigen::Index>(model.dims())) {
        throw DomainError("classify_ovo: feature length does not match model dims");
    }
    const Eigen::ArrayXd inv = 1.0 / (model.covariance_diag().array() + extra);
    const auto classes = static_cast<Eigen::Index>(model.num_classes());
    Eigen::VectorXd d2(classes);
    for (Eigen::Index j = 0; j < classes; ++j) {
        d2[j] = ((x - model.centroids().col(j)).array().square() * inv).sum();
    }

    ClassificationOutcome out;
    std::size_t champion = 0;
    for (Eigen::Index j = 1; j < classes; ++j) {
        const double s = 0.5 * (d2[j] - d2[static_cast<Eigen::Index>(champion)]);
        out.score_trace.push_back(s);
        if (s < 0.0) champion = static_cast<std::size_t>(j);
    }
    out.label = champion;

    const Eigen::ArrayXd log_lik = -0.5 * static_cast<double>(views) * d2.array();
    const Eigen::ArrayXd p = (log_lik - log_lik.maxCoeff()).exp();
    out.confidence = p[static_cast<Eigen::Index>(champion)] / p.sum();
    return out;
}

double cluster_radius(double zeta, std::size_t dims) {
    return std::sqrt(chi_square_quantile(zeta, dims));
}

MarginReduction margin_reduction_bounds(const GmModel& model, double zeta, Variance noise_var) {
    const double noise = checked_noise(model, noise_var, "margin_reduction_bounds");
    if (noise == 0.0) return {};
    const double sigma = cluster_radius(zeta, model.dims());
    const Eigen::ArrayXd c = model.covariance_diag().array();
    const Eigen::ArrayXd term = noise * sigma / (2.0 * c * (c + noise));
    return {term.minCoeff() / c.inverse().sum(), term.maxCoeff() * (c + noise).sum()};
}

MarginReport classification_margin(const GmModel& model, const Hyperplane& h, double zeta,
                                   Variance noise_var) {
    const double noise = checked_noise(model, noise_var, "classification_margin");
    check_plane(model, h);
    MarginReport r;
    r.zeta = zeta;
    r.sigma = cluster_radius(zeta, model.dims());
    r.noise_var = noise;
    const double s = std::fabs(score(h, model.centroid(h.positive)));
    r.centroid_distance = s / std::sqrt(wcw(model, h, noise));
    r.phi = r.centroid_distance - r.sigma;
    r.phi_noiseless = s / std::sqrt(wcw(model, h)) - r.sigma;
    const MarginReduction red = margin_reduction_bounds(model, zeta, noise_var);
    r.delta_phi_lower = red.lower;
    r.delta_phi_upper = red.upper;
    return r;
}

double conditional_accuracy(double score_received, int bits, double p_b) {
    if (!std::isfinite(score_received)) throw DomainError("conditional_accuracy: non-finite score");
    const double var = error_variance(bits, p_b);
    if (var == 0.0) return 1.0;
    return 1.0 - q_function(std::fabs(score_received) / std::sqrt(var));
}

double accuracy_lower_bound(const GmModel& model, const Hyperplane& h, double zeta, int bits,
                            double p_b) {
    return multiview_accuracy_lower_bound(model, h, zeta, bits, p_b, 1);
}

double multiview_accuracy_lower_bound(const GmModel& model, const Hyperplane& h, double zeta,
                                      int bits, double p_b, std::size_t views) {
    if (!(zeta > 0.0 && zeta < 1.0)) throw DomainError("accuracy bound: zeta must lie in (0, 1)");
    if (views < 1) throw DomainError("accuracy bound: views must be >= 1");
    const BoundTerms t = bound_terms(model, h, bits, p_b, "accuracy bound");
    return multiview_bound(t, static_cast<double>(views));
}

double multiview_accuracy_gap(const GmModel& model, const Hyperplane& h, double zeta, int bits,
                              double p_b, std::size_t views) {
    if (!(zeta > 0.0 && zeta < 1.0)) throw DomainError("accuracy bound: zeta must lie in (0, 1)");
    if (views < 1) throw DomainError("accuracy bound: views must be >= 1");
    return multiview_gap(bound_terms(model, h, bits, p_b, "accuracy bound"), static_cast<double>(views));
}

double retransmission_accuracy_lower_bound(const GmModel& model, const Hyperplane& h, double zeta,
                                           int bits, double p_b, std::size_t transmissions) {
    if (!(zeta > 0.0 && zeta < 1.0)) throw DomainError("accuracy bound: zeta must lie in (0, 1)");
    if (transmissions < 1) throw DomainError("accuracy bound: transmissions must be >= 1");
    BoundTerms t = bound_terms(model, h, bits, p_b, "accuracy bound");
    t.noise /= static_cast<double>(transmissions);
    return multiview_bound(t, 1.0);
}

std::size_t required_views(const GmModel& model, const Hyperplane& h, double zeta, int bits,
                           double p_b, double xi) {
    check_xi(xi, "required_views");
    if (!(zeta > 0.0 && zeta < 1.0)) throw DomainError("required_views: zeta must lie in (0, 1)");
    const BoundTerms t = bound_terms(model, h, bits, p_b, "required_views");
    if (t.noise == 0.0) return 1;
    if (t.s2 == 0.0) throw DomainError("required_views: zero margin never reaches xi");
    const double denom = 2.0 * t.noise + t.a;
    const double c = t.s2 / (2.0 * denom);
    const double x = std::log(std::sqrt(t.noise / denom) / (1.0 - xi)) / c;
    auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(x)));
    // guard the ceiling against rounding at exact integers
    while (m > 1 && multiview_bound(t, static_cast<double>(m - 1)) >= xi) --m;
    while (multiview_bound(t, static_cast<double>(m)) < xi) ++m;
    return m;
}

std::size_t required_transmissions(const GmModel& model, const Hyperplane& h, double zeta,
                                   int bits, double p_b, double xi,
                                   RetransmissionVariant variant) {
    check_xi(xi, "required_transmissions");
    if (!(zeta > 0.0 && zeta < 1.0)) {
        throw DomainError("required_transmissions: zeta must lie in (0, 1)");
    }
    const BoundTerms t = bound_terms(model, h, bits, p_b, "required_transmissions");
    if (t.noise == 0.0) return 1;
    if (t.s2 == 0.0) throw DomainError("required_transmissions: zero margin never reaches xi");
    const double u = t.s2 / t.a;  // (sigma + phi)^2
    const double log_arg = std::log(2.0 * u) + u + 2.0 * std::log1p(-xi);
    const double w = lambert_w0_of_exp(log_arg);
    const double inner = variant == RetransmissionVariant::minus_one ? 1.0 : 2.0;
    const double value = t.noise / t.a * (2.0 * u / w - inner);
    if (!(value > 1.0)) return 1;
    return static_cast<std::size_t>(std::ceil(value));
}

}  // namespace semcom
