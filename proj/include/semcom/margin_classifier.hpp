#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "semcom/gm_model.hpp"

namespace semcom {

/// A variance carrying the units it is expressed in; mixing units is refused.
struct Variance {
    double value = 0.0;
    Units units = Units::feature;
};

inline Variance feature_variance(double v) { return {v, Units::feature}; }
inline Variance quantized_variance(double v) { return {v, Units::quantized}; }

/// Decision boundary w^T x + b = 0 with unit w. `positive` scores above zero.
struct Hyperplane {
    Eigen::VectorXd w;
    double b = 0.0;
    std::size_t positive = 0;
    std::size_t negative = 1;
};

/// Bayes boundary between two equal-covariance classes: the perpendicular
/// bisector of the centroids in whitened coordinates, mapped back.
Hyperplane hyperplane_between(const GmModel& model, std::size_t l, std::size_t l2);

double score(const Hyperplane& h, const FeatureVector& x);

struct ClassificationOutcome {
    std::size_t label = 0;
    double confidence = 0.0;
    /// Pairwise scores of each elimination round, (d_j^2 - d_champion^2) / 2.
    std::vector<double> score_trace;
};

/// Sequential one-versus-one elimination under C + noise_var * I; ties keep the
/// lower class index. Confidence is the posterior of the winner with `views`
/// pooled observations.
ClassificationOutcome classify_ovo(const GmModel& model, const FeatureVector& x,
                                   Variance noise_var = {}, std::size_t views = 1);

/// Label only; skips the posterior and the trace.
std::size_t classify_label(const GmModel& model, const FeatureVector& x, Variance noise_var = {});

/// Mahalanobis radius holding probability zeta of a D-dimensional cluster.
double cluster_radius(double zeta, std::size_t dims);

struct MarginReport {
    double zeta = 0.0;
    double sigma = 0.0;
    /// Margin under C + noise_var * I; may be negative.
    double phi = 0.0;
    double phi_noiseless = 0.0;
    /// sigma + phi = |s(mu)| / sqrt(w^T (C + noise_var I) w).
    double centroid_distance = 0.0;
    double noise_var = 0.0;
    double delta_phi_lower = 0.0;
    double delta_phi_upper = 0.0;
};

MarginReport classification_margin(const GmModel& model, const Hyperplane& h, double zeta,
                                   Variance noise_var = {});

struct MarginReduction {
    double lower = 0.0;
    double upper = 0.0;
};

MarginReduction margin_reduction_bounds(const GmModel& model, double zeta, Variance noise_var);

/// 1 - Q(|s| / sigma_delta); the score is in quantized units.
double conditional_accuracy(double score_received, int bits, double p_b);

/// Lower bound on P(correct) after the bit-flip channel; model in quantized units.
double accuracy_lower_bound(const GmModel& model, const Hyperplane& h, double zeta, int bits,
                            double p_b);

/// Same bound with m average-pooled views.
double multiview_accuracy_lower_bound(const GmModel& model, const Hyperplane& h, double zeta,
                                      int bits, double p_b, std::size_t views);

/// 1 - multiview_accuracy_lower_bound, computed without cancellation.
double multiview_accuracy_gap(const GmModel& model, const Hyperplane& h, double zeta, int bits,
                              double p_b, std::size_t views);

/// Same bound when each feature is the average of `transmissions` received copies,
/// i.e. with channel variance sigma_delta^2 / T.
double retransmission_accuracy_lower_bound(const GmModel& model, const Hyperplane& h, double zeta,
                                           int bits, double p_b, std::size_t transmissions);

/// Smallest m with multiview_accuracy_lower_bound >= xi.
std::size_t required_views(const GmModel& model, const Hyperplane& h, double zeta, int bits,
                           double p_b, double xi);

/// Inner constant of the retransmission-count formula.
enum class RetransmissionVariant { minus_one, minus_two };

/// Averaged transmissions needed to reach accuracy xi, at least 1.
std::size_t required_transmissions(const GmModel& model, const Hyperplane& h, double zeta,
                                   int bits, double p_b, double xi,
                                   RetransmissionVariant variant = RetransmissionVariant::minus_one);

}  // namespace semcom
