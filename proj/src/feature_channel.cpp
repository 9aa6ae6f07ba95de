#include "semcom/feature_channel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "semcom/errors.hpp"
#include "semcom/numerics.hpp"

namespace semcom {

namespace {

constexpr std::uint64_t kMaxBlocklength = 1'000'000'000;

void check_bits(int bits, const char* what) {
    if (bits < 2 || bits > 16) {
        throw ConfigError(std::string(what) + ": bits must lie in [2, 16]");
    }
}

void check_bep(double p_b, const char* what) {
    if (!(p_b >= 0.0 && p_b <= 0.5)) {
        throw DomainError(std::string(what) + ": p_b must lie in [0, 0.5]");
    }
}

std::uint32_t word_mask(int bits) { return (std::uint32_t{1} << bits) - 1U; }

// Two's-complement n-bit pattern of a word and back.
std::uint32_t to_pattern(std::int32_t word, int bits) {
    return static_cast<std::uint32_t>(word) & word_mask(bits);
}

std::int32_t from_pattern(std::uint32_t pattern, int bits) {
    const std::uint32_t sign = std::uint32_t{1} << (bits - 1);
    const auto raw = static_cast<std::int32_t>(pattern & (sign - 1U));
    return (pattern & sign) ? raw - static_cast<std::int32_t>(sign) : raw;
}

bool is_valid_constellation(int m) {
    if (m == 2) return true;
    if (m < 4) return false;
    while (m % 4 == 0) m /= 4;
    return m == 1;
}

int log2_int(int m) {
    int k = 0;
    while ((1 << k) < m) ++k;
    return k;
}

}  // namespace

QuantizedVector quantize(const FeatureVector& x, int bits, double scale) {
    check_bits(bits, "quantize");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("quantize: scale must be positive");
    QuantizedVector q;
    q.bits = bits;
    q.scale = scale;
    q.words.resize(static_cast<std::size_t>(x.size()));
    const double lo = q.min_word();
    const double hi = q.max_word();
    for (Eigen::Index d = 0; d < x.size(); ++d) {
        if (!std::isfinite(x[d])) throw EncodingError("quantize: non-finite feature");
        const double r = std::clamp(std::round(x[d] * scale), lo, hi);
        q.words[static_cast<std::size_t>(d)] = static_cast<std::int32_t>(r);
    }
    return q;
}

FeatureVector dequantize(const QuantizedVector& q) {
    FeatureVector x(static_cast<Eigen::Index>(q.words.size()));
    for (std::size_t d = 0; d < q.words.size(); ++d) {
        x[static_cast<Eigen::Index>(d)] = q.words[d] / q.scale;
    }
    return x;
}

QuantizedVector bit_flip_channel(const QuantizedVector& q, double p_b, Rng& rng) {
    check_bep(p_b, "bit_flip_channel");
    QuantizedVector out = q;
    if (p_b == 0.0 || q.words.empty()) return out;

    // Jump straight to the next flipped bit: gaps between flips are geometric.
    const auto bits = static_cast<std::uint64_t>(q.bits);
    const std::uint64_t total = bits * q.words.size();
    std::geometric_distribution<std::uint64_t> gap(p_b);
    std::uint64_t pos = gap(rng);
    while (pos < total) {
        const std::size_t d = pos / bits;
        const auto bit = static_cast<int>(pos % bits);
        const std::uint32_t pattern = to_pattern(out.words[d], q.bits) ^ (std::uint32_t{1} << bit);
        out.words[d] = from_pattern(pattern, q.bits);
        pos += 1 + gap(rng);
    }
    return out;
}

BitFlipChannel::BitFlipChannel(int bits, double p_b) : bits_(bits), p_b_(p_b) {
    check_bits(bits, "BitFlipChannel");
    check_bep(p_b, "BitFlipChannel");
    if (p_b == 0.0) return;

    // Vose alias table over all 2^n masks, P(mask) = p^k (1-p)^(n-k) with k set bits.
    const std::size_t size = std::size_t{1} << bits;
    std::vector<double> scaled(size);
    for (std::size_t m = 0; m < size; ++m) {
        const int k = std::popcount(static_cast<std::uint32_t>(m));
        scaled[m] = std::pow(p_b, k) * std::pow(1.0 - p_b, bits - k) * static_cast<double>(size);
    }
    accept_.assign(size, 1.0);
    alias_.resize(size);
    std::vector<std::uint32_t> small;
    std::vector<std::uint32_t> large;
    for (std::size_t m = 0; m < size; ++m) {
        alias_[m] = static_cast<std::uint32_t>(m);
        (scaled[m] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(m));
    }
    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back();
        small.pop_back();
        const std::uint32_t l = large.back();
        accept_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
}

std::uint32_t BitFlipChannel::draw_mask(Rng& rng) const {
    constexpr double inv53 = 0x1.0p-53;
    const std::uint64_t u = rng();
    const auto index = static_cast<std::uint32_t>(u & (accept_.size() - 1));
    // with n <= 11 the index bits and the top 53 bits of the same draw do not overlap
    const std::uint64_t coin = bits_ <= 11 ? (u >> 11) : (rng() >> 11);
    return static_cast<double>(coin) * inv53 < accept_[index] ? index : alias_[index];
}

QuantizedVector BitFlipChannel::apply(const QuantizedVector& q, Rng& rng) const {
    if (q.bits != bits_) throw DomainError("BitFlipChannel: word width mismatch");
    QuantizedVector out = q;
    if (p_b_ == 0.0) return out;
    for (auto& word : out.words) {
        word = from_pattern(to_pattern(word, bits_) ^ draw_mask(rng), bits_);
    }
    return out;
}

QuantizedVector flip_bits(const QuantizedVector& q, std::span<const std::uint32_t> masks) {
    if (masks.size() != q.words.size()) throw DomainError("flip_bits: one mask per word required");
    QuantizedVector out = q;
    for (std::size_t d = 0; d < masks.size(); ++d) {
        out.words[d] = from_pattern(to_pattern(q.words[d], q.bits) ^ (masks[d] & word_mask(q.bits)),
                                    q.bits);
    }
    return out;
}

double error_variance(int bits, double p_b) {
    check_bits(bits, "error_variance");
    check_bep(p_b, "error_variance");
    return (std::ldexp(1.0, 2 * bits) - 1.0) / 3.0 * p_b;
}

double error_variance_single_flip(int bits, double p_b) {
    check_bits(bits, "error_variance_single_flip");
    check_bep(p_b, "error_variance_single_flip");
    return (std::ldexp(1.0, 2 * bits) - 1.0) / (3.0 * bits) * -std::expm1(bits * std::log1p(-p_b));
}

double ks_statistic_normal(std::vector<double>& values, double sigma) {
    if (values.empty()) throw DomainError("ks_statistic_normal: empty sample");
    if (!(sigma > 0.0)) return 0.0;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = 1.0 - q_function(values[i] / sigma);
        worst = std::max({worst, f - static_cast<double>(i) / n,
                          static_cast<double>(i + 1) / n - f});
    }
    return worst;
}

ProjectedErrorStats projected_error_stats(std::size_t dims, int bits, double p_b,
                                          const Eigen::VectorXd& w, Rng& rng,
                                          std::size_t samples) {
    check_bits(bits, "projected_error_stats");
    check_bep(p_b, "projected_error_stats");
    if (w.size() != static_cast<Eigen::Index>(dims)) {
        throw DomainError("projected_error_stats: w length does not match dims");
    }
    if (std::fabs(w.norm() - 1.0) > 1e-9) throw DomainError("projected_error_stats: w must be unit");
    if (samples < 2) throw DomainError("projected_error_stats: need at least two samples");

    QuantizedVector q;
    q.bits = bits;
    q.words.resize(dims);
    std::uniform_int_distribution<std::int32_t> word(q.min_word(), q.max_word());

    std::vector<double> proj(samples);
    double sum = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (auto& v : q.words) v = word(rng);
        const QuantizedVector r = bit_flip_channel(q, p_b, rng);
        double acc = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
            acc += w[static_cast<Eigen::Index>(d)] * (r.words[d] - q.words[d]);
        }
        proj[s] = acc;
        sum += acc;
    }
    ProjectedErrorStats st;
    st.mean = sum / static_cast<double>(samples);
    double ss = 0.0;
    for (double v : proj) ss += (v - st.mean) * (v - st.mean);
    st.variance = ss / static_cast<double>(samples - 1);
    st.ks_statistic = ks_statistic_normal(proj, std::sqrt(error_variance(bits, p_b)));
    return st;
}

double bpsk_bep(double snr_linear) {
    if (!(snr_linear >= 0.0)) throw DomainError("bpsk_bep: snr must be non-negative");
    if (std::isinf(snr_linear)) return 0.0;
    return q_function(std::sqrt(2.0 * snr_linear));
}

double bpsk_snr_for_bep(double p_b) {
    if (!(p_b > 0.0 && p_b <= 0.5)) throw DomainError("bpsk_snr_for_bep: p_b must lie in (0, 0.5]");
    const double z = q_inverse(p_b);
    return 0.5 * z * z;
}

double square_qam_bep(double snr_linear, int constellation) {
    if (!(snr_linear >= 0.0)) throw DomainError("square_qam_bep: snr must be non-negative");
    if (!is_valid_constellation(constellation)) {
        throw ConfigError("square_qam_bep: constellation must be 2 or a power of 4");
    }
    if (constellation == 2) return bpsk_bep(snr_linear);
    if (std::isinf(snr_linear)) return 0.0;
    const double m = constellation;
    const double k = log2_int(constellation);
    const double p = 4.0 / k * (1.0 - 1.0 / std::sqrt(m)) * q_function(std::sqrt(3.0 * snr_linear / (m - 1.0)));
    return std::min(p, 0.5);
}

ModulationPolicy default_modulation_policy() {
    return {{0.0, 4}, {5.0, 16}, {10.0, 64}, {16.0, 256}};
}

void validate_policy(const ModulationPolicy& policy) {
    if (policy.empty()) throw ConfigError("modulation_policy: policy is empty");
    for (std::size_t i = 0; i < policy.size(); ++i) {
        if (!std::isfinite(policy[i].snr_db)) throw ConfigError("modulation_policy: non-finite snr_db");
        if (!is_valid_constellation(policy[i].constellation)) {
            throw ConfigError("modulation_policy: M=" + std::to_string(policy[i].constellation) +
                              " is not 2 or a power of 4");
        }
        if (i > 0 && !(policy[i].snr_db > policy[i - 1].snr_db)) {
            throw ConfigError("modulation_policy: thresholds must be strictly increasing");
        }
    }
}

ModulationChoice select_modulation(double snr_linear, const ModulationPolicy& policy) {
    validate_policy(policy);
    if (!(snr_linear >= 0.0)) throw DomainError("select_modulation: snr must be non-negative");
    const double snr_db = snr_linear > 0.0 ? 10.0 * std::log10(snr_linear) : -HUGE_VAL;
    int m = 2;
    for (const auto& step : policy) {
        if (step.snr_db <= snr_db) m = step.constellation;
    }
    return {m, log2_int(m), square_qam_bep(snr_linear, m)};
}

void LinkConfig::validate() const {
    check_bits(bits_per_feature, "LinkConfig");
    if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
        throw ConfigError("LinkConfig: bandwidth_hz must be positive");
    }
    if (snr_linear && !(*snr_linear >= 0.0)) throw ConfigError("LinkConfig: snr must be non-negative");
    if (bep && !(*bep >= 0.0 && *bep <= 0.5)) throw ConfigError("LinkConfig: bep must lie in [0, 0.5]");
    switch (scheme) {
    case Scheme::fixed_binary:
        if (snr_linear.has_value() == bep.has_value()) {
            throw ConfigError("LinkConfig: fixed_binary needs exactly one of snr and bep");
        }
        break;
    case Scheme::adaptive_multilevel:
        if (!snr_linear) throw ConfigError("LinkConfig: adaptive_multilevel needs snr");
        validate_policy(modulation_policy);
        break;
    case Scheme::reliable_coded:
        if (snr_linear.has_value() == bep.has_value()) {
            throw ConfigError("LinkConfig: reliable_coded needs exactly one of snr and bep");
        }
        if (!(packet_error_target > 0.0 && packet_error_target < 1.0)) {
            throw ConfigError("LinkConfig: packet_error_target must lie in (0, 1)");
        }
        break;
    }
}

double effective_packet_error(const LinkConfig& link, std::uint64_t k_bits) {
    if (link.reliability == ReliabilityTarget::packet) return link.packet_error_target;
    // every one of the k bits must survive at the target bit error rate
    return -std::expm1(static_cast<double>(k_bits) * std::log1p(-link.packet_error_target));
}

LinkOperatingPoint operating_point(const LinkConfig& link, std::size_t dims) {
    link.validate();
    const auto payload = static_cast<double>(link.bits_per_feature) * static_cast<double>(dims);
    LinkOperatingPoint op;
    switch (link.scheme) {
    case Scheme::fixed_binary:
        op.p_b = link.bep ? *link.bep : bpsk_bep(*link.snr_linear);
        op.latency_s = payload / link.bandwidth_hz;
        break;
    case Scheme::adaptive_multilevel: {
        const ModulationChoice choice = select_modulation(*link.snr_linear, link.modulation_policy);
        op.p_b = choice.p_b;
        op.constellation = choice.constellation;
        op.bits_per_symbol = choice.bits_per_symbol;
        op.latency_s = payload / (link.bandwidth_hz * choice.bits_per_symbol);
        break;
    }
    case Scheme::reliable_coded: {
        const double snr = link.snr_linear ? *link.snr_linear : bpsk_snr_for_bep(*link.bep);
        const auto k = static_cast<std::uint64_t>(payload);
        op.p_b = 0.0;
        op.error_free = true;
        op.latency_s = urllc_latency(snr, effective_packet_error(link, k), k, link.bandwidth_hz);
        break;
    }
    }
    return op;
}

TransmitResult transmit_feature(const FeatureVector& x, const LinkConfig& link, int bits,
                                double scale, Rng& rng) {
    return transmit_averaged(x, link, bits, scale, 1, rng);
}

TransmitResult transmit_averaged(const FeatureVector& x, const LinkConfig& link, int bits,
                                 double scale, std::size_t transmissions, Rng& rng) {
    LinkConfig effective = link;
    effective.bits_per_feature = bits;
    return PreparedLink(effective, static_cast<std::size_t>(x.size())).transmit(x, scale, transmissions, rng);
}

PreparedLink::PreparedLink(const LinkConfig& link, std::size_t dims)
    : point_(operating_point(link, dims)), channel_(link.bits_per_feature, point_.p_b) {}

TransmitResult PreparedLink::transmit(const FeatureVector& x, double scale,
                                      std::size_t transmissions, Rng& rng) const {
    if (transmissions < 1) throw DomainError("transmit: transmissions must be >= 1");
    const int bits = channel_.bits();
    TransmitResult result;
    result.transmissions = transmissions;
    result.bep_used = point_.p_b;
    result.bits_sent = static_cast<std::size_t>(bits) * static_cast<std::size_t>(x.size()) * transmissions;
    result.latency_s = point_.latency_s * static_cast<double>(transmissions);
    if (point_.error_free) {
        result.received = x;
        return result;
    }
    const QuantizedVector q = quantize(x, bits, scale);
    if (transmissions == 1) {
        result.received = dequantize(channel_.apply(q, rng));
        return result;
    }
    FeatureVector acc = FeatureVector::Zero(x.size());
    for (std::size_t t = 0; t < transmissions; ++t) acc += dequantize(channel_.apply(q, rng));
    result.received = acc / static_cast<double>(transmissions);
    return result;
}

double default_scale(const GmModel& model, int bits, double headroom_sigmas) {
    check_bits(bits, "default_scale");
    if (!(headroom_sigmas >= 0.0)) throw ConfigError("default_scale: headroom must be >= 0");
    const Eigen::VectorXd reach = model.centroids().cwiseAbs().rowwise().maxCoeff() +
                                  headroom_sigmas * model.covariance_diag().cwiseSqrt();
    const double extent = reach.maxCoeff();
    if (!(extent > 0.0)) throw ConfigError("default_scale: model has zero extent");
    return (std::ldexp(1.0, bits - 1) - 1.0) / extent;
}

double awgn_capacity(double snr_linear) { return std::log2(1.0 + snr_linear); }

double awgn_dispersion(double snr_linear) {
    const double g = snr_linear;
    const double log2e = std::numbers::log2e;
    return g * (g + 2.0) / ((1.0 + g) * (1.0 + g)) * log2e * log2e;
}

double normal_approximation_bits(double snr_linear, double eps, double blocklength) {
    return blocklength * awgn_capacity(snr_linear) -
           std::sqrt(blocklength * awgn_dispersion(snr_linear)) * q_inverse(eps) +
           0.5 * std::log2(blocklength);
}

std::uint64_t urllc_blocklength(double snr_linear, double eps, std::uint64_t k_bits) {
    if (!(snr_linear > 0.0) || !std::isfinite(snr_linear)) {
        throw DomainError("urllc_blocklength: snr must be positive and finite");
    }
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("urllc_blocklength: eps must lie in (0, 1)");
    if (k_bits < 1) throw DomainError("urllc_blocklength: k_bits must be >= 1");

    const double c = awgn_capacity(snr_linear);
    const double a = std::sqrt(awgn_dispersion(snr_linear)) * q_inverse(eps);
    const auto k = static_cast<double>(k_bits);
    auto enough = [&](std::uint64_t n) {
        const auto x = static_cast<double>(n);
        return x * c - std::sqrt(x) * a + 0.5 * std::log2(x) >= k;
    };

    // Past n0 the payload is strictly increasing in N; below it, scan only when
    // the payload could possibly reach k there.
    const double n0 = a > 0.0 ? (a / (2.0 * c)) * (a / (2.0 * c)) : 1.0;
    const auto n0_int = static_cast<std::uint64_t>(std::min(std::ceil(n0), 1e18));
    if (n0_int > 1 && n0_int <= kMaxBlocklength && n0 * c + 0.5 * std::log2(n0) >= k) {
        for (std::uint64_t n = 1; n < n0_int; ++n) {
            if (enough(n)) return n;
        }
    }
    std::uint64_t lo = std::max<std::uint64_t>(1, n0_int);
    if (lo > kMaxBlocklength) throw SaturationError("urllc_blocklength: no N <= 1e9 carries the payload");
    if (enough(lo)) return lo;
    std::uint64_t hi = lo;
    while (!enough(hi)) {
        if (hi >= kMaxBlocklength) {
            throw SaturationError("urllc_blocklength: no N <= 1e9 carries the payload");
        }
        lo = hi;
        hi = std::min(kMaxBlocklength, hi * 2);
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (enough(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

double urllc_latency(double snr_linear, double eps, std::uint64_t k_bits, double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw DomainError("urllc_latency: bandwidth must be positive");
    return static_cast<double>(urllc_blocklength(snr_linear, eps, k_bits)) / bandwidth_hz;
}

std::string to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::fixed_binary: return "fixed_binary";
    case Scheme::adaptive_multilevel: return "adaptive_multilevel";
    case Scheme::reliable_coded: return "reliable_coded";
    }
    return "unknown";
}

}  // namespace semcom
