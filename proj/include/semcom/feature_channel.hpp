#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semcom/gm_model.hpp"
#include "semcom/random.hpp"

namespace semcom {

/// n-bit two's-complement words plus the factor that maps feature units onto them.
struct QuantizedVector {
    std::vector<std::int32_t> words;
    int bits = 8;
    double scale = 1.0;

    std::int32_t min_word() const { return -(std::int32_t{1} << (bits - 1)); }
    std::int32_t max_word() const { return (std::int32_t{1} << (bits - 1)) - 1; }
};

/// round(x_d * scale), saturated to the n-bit signed range.
QuantizedVector quantize(const FeatureVector& x, int bits, double scale);

FeatureVector dequantize(const QuantizedVector& q);

/// Flips each bit of each word independently with probability p_b.
QuantizedVector bit_flip_channel(const QuantizedVector& q, double p_b, Rng& rng);

/// Per-word flip-mask sampler for a fixed (n, P_b). Draws one whole n-bit mask per
/// word from its exact distribution, so the cost does not grow with P_b.
class BitFlipChannel {
public:
    BitFlipChannel(int bits, double p_b);

    int bits() const { return bits_; }
    double p_b() const { return p_b_; }

    QuantizedVector apply(const QuantizedVector& q, Rng& rng) const;

private:
    std::uint32_t draw_mask(Rng& rng) const;

    int bits_;
    double p_b_;
    std::vector<double> accept_;
    std::vector<std::uint32_t> alias_;
};

/// XORs masks[d] into the n-bit pattern of word d and re-reads it as signed.
QuantizedVector flip_bits(const QuantizedVector& q, std::span<const std::uint32_t> masks);

/// Variance of the per-feature channel error in quantized units^2, (4^n - 1) P_b / 3.
double error_variance(int bits, double p_b);

/// Single-flip model of the same variance, (4^n - 1) / (3n) * (1 - (1 - P_b)^n).
double error_variance_single_flip(int bits, double p_b);

struct ProjectedErrorStats {
    double mean = 0.0;
    double variance = 0.0;
    double ks_statistic = 0.0;
};

/// Monte-Carlo moments of w^T (x_hat - x) over uniformly random n-bit words, and
/// the Kolmogorov-Smirnov distance to N(0, error_variance(n, p_b)).
ProjectedErrorStats projected_error_stats(std::size_t dims, int bits, double p_b,
                                          const Eigen::VectorXd& w, Rng& rng,
                                          std::size_t samples);

/// Kolmogorov-Smirnov distance between a sample and N(0, sigma^2). Sorts in place.
double ks_statistic_normal(std::vector<double>& values, double sigma);

/// Uncoded binary antipodal signalling, Q(sqrt(2 gamma)).
double bpsk_bep(double snr_linear);

/// SNR at which bpsk_bep equals p_b.
double bpsk_snr_for_bep(double p_b);

/// Gray-coded square M-QAM bit error approximation
/// (4 / log2 M)(1 - 1/sqrt(M)) Q(sqrt(3 gamma / (M - 1))); exact for M = 4.
double square_qam_bep(double snr_linear, int constellation);

struct ModulationStep {
    double snr_db = 0.0;
    int constellation = 2;
};

using ModulationPolicy = std::vector<ModulationStep>;

/// The shipped adaptive policy; mirrors data/defaults/modulation_policy.json.
ModulationPolicy default_modulation_policy();

void validate_policy(const ModulationPolicy& policy);

struct ModulationChoice {
    int constellation = 2;
    int bits_per_symbol = 1;
    double p_b = 0.5;
};

/// Largest constellation whose threshold is at or below the SNR; BPSK below all thresholds.
ModulationChoice select_modulation(double snr_linear, const ModulationPolicy& policy);

enum class Scheme { fixed_binary, adaptive_multilevel, reliable_coded };

/// How the reliable scheme's reliability target maps onto the packet error probability.
enum class ReliabilityTarget { packet, bit };

struct LinkConfig {
    Scheme scheme = Scheme::fixed_binary;
    std::optional<double> snr_linear;
    std::optional<double> bep;
    double bandwidth_hz = 1e6;
    int bits_per_feature = 8;
    double packet_error_target = 1e-9;
    ReliabilityTarget reliability = ReliabilityTarget::packet;
    ModulationPolicy modulation_policy = default_modulation_policy();

    void validate() const;
};

/// Per-transmission operating point of a link for a feature vector of `dims` features.
struct LinkOperatingPoint {
    double p_b = 0.0;
    int bits_per_symbol = 1;
    int constellation = 2;
    double latency_s = 0.0;
    bool error_free = false;
};

LinkOperatingPoint operating_point(const LinkConfig& link, std::size_t dims);

struct TransmitResult {
    FeatureVector received;
    double latency_s = 0.0;
    std::size_t bits_sent = 0;
    double bep_used = 0.0;
    std::size_t transmissions = 1;
};

/// quantize -> bit flips at the link's P_b -> dequantize. The reliable scheme
/// delivers x exactly with finite-blocklength latency.
TransmitResult transmit_feature(const FeatureVector& x, const LinkConfig& link, int bits,
                                double scale, Rng& rng);

/// `transmissions` independent uses of the link, received copies averaged.
TransmitResult transmit_averaged(const FeatureVector& x, const LinkConfig& link, int bits,
                                 double scale, std::size_t transmissions, Rng& rng);

/// Precomputed link state for inner loops: operating point plus channel sampler.
class PreparedLink {
public:
    PreparedLink(const LinkConfig& link, std::size_t dims);

    const LinkOperatingPoint& point() const { return point_; }
    int bits() const { return channel_.bits(); }

    TransmitResult transmit(const FeatureVector& x, double scale, std::size_t transmissions,
                            Rng& rng) const;

private:
    LinkOperatingPoint point_;
    BitFlipChannel channel_;
};

/// Default scale: (2^{n-1} - 1) / max_d(max_l |mu_{l,d}| + headroom * sqrt(C_d)).
double default_scale(const GmModel& model, int bits, double headroom_sigmas = 3.5);

/// Gaussian-channel capacity log2(1 + gamma) in bits per channel use.
double awgn_capacity(double snr_linear);

/// Channel dispersion gamma (gamma + 2) / (1 + gamma)^2 * (log2 e)^2.
double awgn_dispersion(double snr_linear);

/// Normal-approximation information bits carried by N channel uses:
/// N C - sqrt(N V) Qinv(eps) + log2(N) / 2.
double normal_approximation_bits(double snr_linear, double eps, double blocklength);

/// Smallest N whose normal-approximation payload reaches k_bits.
std::uint64_t urllc_blocklength(double snr_linear, double eps, std::uint64_t k_bits);

double urllc_latency(double snr_linear, double eps, std::uint64_t k_bits, double bandwidth_hz);

/// Packet error probability used for the reliable scheme under `link.reliability`.
double effective_packet_error(const LinkConfig& link, std::uint64_t k_bits);

std::string to_string(Scheme scheme);

}  // namespace semcom
