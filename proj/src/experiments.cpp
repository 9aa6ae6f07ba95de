#include "semcom/experiments.hpp"

#include <cmath>
#include <cstdio>

#include "semcom/errors.hpp"
#include "semcom/exploration.hpp"
#include "semcom/margin_classifier.hpp"

namespace semcom {

namespace {

LinkConfig with_bep(LinkConfig link, Scheme scheme, double bep) {
    link.scheme = scheme;
    link.snr_linear.reset();
    link.bep = bep;
    return link;
}

LinkConfig with_snr(LinkConfig link, Scheme scheme, double snr_linear) {
    link.scheme = scheme;
    link.bep.reset();
    link.snr_linear = snr_linear;
    return link;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string label(const char* key, double value) { return std::string(key) + "=" + format_double(value); }

ExplorationScenario scenario_from(const ExperimentConfig& cfg, const LinkConfig& link, double xi) {
    ExplorationScenario s;
    const ExplorationSpec& e = cfg.exploration;
    s.arrival_rate = e.arrival_rate;
    s.num_objects = e.num_objects;
    s.relevant_fraction = e.relevant_fraction;
    s.path_lengths = e.path_lengths;
    s.max_views_per_object = e.max_views_per_object;
    s.time_limit_s = e.time_limit_s;
    s.enhancement = e.enhancement;
    s.model = cfg.model.build();
    s.scale = cfg.quantization.resolve(s.model);
    s.link = link;
    s.xi = xi;
    s.zeta = cfg.sweep.zeta;
    s.variant = cfg.sweep.variant;
    return s;
}

const std::vector<std::string> kEpisodeColumns{"mean_total_s",        "total_std_error",
                                               "mean_exploration_s",  "mean_transmission_s",
                                               "mean_views",          "success_rate"};

std::vector<std::string> episode_cells(const EpisodeSummary& s) {
    return {cell(s.mean_total_s),        cell(s.total_std_error), cell(s.mean_exploration_s),
            cell(s.mean_transmission_s), cell(s.mean_views),      cell(s.success_rate)};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

struct Ctx {
    WorkerPool& pool;
    const ProgressFn& report;

    void progress(const std::string& experiment, std::size_t done, std::size_t total) const {
        if (report) report(experiment, done, total);
    }
};

CsvTable acc_vs_bep(const ExperimentConfig& cfg, std::uint64_t seed, const Ctx& ctx) {
    CsvTable t({"series", "gain", "bep", "accuracy", "ci_half_width", "alignment", "bound"});
    const auto& amps = *cfg.sweep.amplitudes;
    const auto& beps = *cfg.sweep.bep;
    std::size_t done = 0;
    for (std::size_t a = 0; a < amps.size(); ++a) {
        AccuracyTask task;
        task.model = cfg.model.build_with_amplitude(amps[a]);
        task.scale = cfg.quantization.resolve(task.model);
        task.trials = cfg.trials;
        const double gain = discriminant_gain(task.model, 0, 1);
        const GmModel q = task.model.in_quantized_units(task.scale);
        const Hyperplane h = hyperplane_between(q, 0, 1);
        const std::uint64_t series_seed = derive_seed(seed, "acc_vs_bep/" + std::to_string(a));
        for (const double bep : beps) {
            task.link = with_bep(cfg.link, Scheme::fixed_binary, bep);
            const AccuracyEstimate est = monte_carlo_accuracy(task, series_seed, ctx.pool);
            const double bound = accuracy_lower_bound(q, h, cfg.sweep.zeta, cfg.quantization.bits, bep);
            t.add_row({label("gain", gain), cell(gain), cell(bep), cell(est.accuracy),
                       cell(est.ci_half_width), cell(est.alignment), cell(bound)});
            ctx.progress("acc_vs_bep", ++done, amps.size() * beps.size());
        }
    }
    return t;
}

CsvTable latency_vs_bep(const ExperimentConfig& cfg) {
    CsvTable t({"series", "bep", "snr_linear", "latency_s"});
    const std::size_t dims = cfg.model.build().dims();
    for (const double bep : *cfg.sweep.bep) {
        const LinkOperatingPoint ull = operating_point(with_bep(cfg.link, Scheme::fixed_binary, bep), dims);
        t.add_row({"ULL-FT", cell(bep), cell(bpsk_snr_for_bep(bep)), cell(ull.latency_s)});
    }
    for (const double bep : *cfg.sweep.bep) {
        const LinkOperatingPoint rel =
            operating_point(with_bep(cfg.link, Scheme::reliable_coded, bep), dims);
        t.add_row({"URLLC", cell(bep), cell(bpsk_snr_for_bep(bep)), cell(rel.latency_s)});
    }
    return t;
}

CsvTable latency_vs_snr(const ExperimentConfig& cfg) {
    CsvTable t({"series", "snr_db", "bep", "constellation", "latency_s"});
    const std::size_t dims = cfg.model.build().dims();
    const std::pair<const char*, Scheme> series[] = {{"ULL-FT scheme 1", Scheme::fixed_binary},
                                                     {"ULL-FT scheme 2", Scheme::adaptive_multilevel},
                                                     {"URLLC", Scheme::reliable_coded}};
    for (const auto& [name, scheme] : series) {
        for (const double db : *cfg.sweep.snr_db) {
            const LinkOperatingPoint op = operating_point(with_snr(cfg.link, scheme, db_to_linear(db)), dims);
            t.add_row({name, cell(db), cell(op.p_b), cell(op.constellation), cell(op.latency_s)});
        }
    }
    return t;
}

CsvTable acc_vs_views_or_retx(const ExperimentConfig& cfg, std::uint64_t seed, const Ctx& ctx,
                              bool views_axis) {
    const char* axis = views_axis ? "views" : "transmissions";
    const std::string name = views_axis ? "acc_vs_views" : "acc_vs_retx";
    CsvTable t({"series", "bep", axis, "accuracy", "ci_half_width", "alignment", "bound"});
    AccuracyTask task;
    task.model = cfg.model.build();
    task.scale = cfg.quantization.resolve(task.model);
    task.trials = cfg.trials;
    const GmModel q = task.model.in_quantized_units(task.scale);
    const Hyperplane h = hyperplane_between(q, 0, 1);
    const auto& counts = views_axis ? *cfg.sweep.views : *cfg.sweep.transmissions;
    const auto& beps = *cfg.sweep.bep;
    std::size_t done = 0;
    for (std::size_t b = 0; b < beps.size(); ++b) {
        task.link = with_bep(cfg.link, Scheme::fixed_binary, beps[b]);
        const std::uint64_t series_seed = derive_seed(seed, name + "/" + std::to_string(b));
        for (const std::size_t k : counts) {
            if (k < 1) throw ConfigError(std::string("sweep.") + axis + " entries must be >= 1");
            task.views = views_axis ? k : 1;
            task.transmissions = views_axis ? 1 : k;
            const AccuracyEstimate est = monte_carlo_accuracy(task, series_seed, ctx.pool);
            const double bound =
                views_axis ? multiview_accuracy_lower_bound(q, h, cfg.sweep.zeta, cfg.quantization.bits, beps[b], k)
                           : retransmission_accuracy_lower_bound(q, h, cfg.sweep.zeta, cfg.quantization.bits,
                                                                 beps[b], k);
            t.add_row({label("bep", beps[b]), cell(beps[b]), cell(k), cell(est.accuracy),
                       cell(est.ci_half_width), cell(est.alignment), cell(bound)});
            ctx.progress(name, ++done, beps.size() * counts.size());
        }
    }
    return t;
}

CsvTable explore_latency_vs_bep(const ExperimentConfig& cfg, std::uint64_t seed, const Ctx& ctx) {
    CsvTable t(concat({"series", "xi", "bep"}, kEpisodeColumns));
    const std::uint64_t episode_seed = derive_seed(seed, "episodes");
    const std::pair<const char*, Scheme> series[] = {{"ULL-FT", Scheme::fixed_binary},
                                                     {"URLLC", Scheme::reliable_coded}};
    const auto& xis = *cfg.sweep.xi;
    const auto& beps = *cfg.sweep.bep;
    std::size_t done = 0;
    for (const auto& [name, scheme] : series) {
        for (const double xi : xis) {
            for (const double bep : beps) {
                const ExplorationScenario s = scenario_from(cfg, with_bep(cfg.link, scheme, bep), xi);
                const EpisodeSummary sum = run_episodes(s, cfg.episodes, episode_seed, ctx.pool);
                t.add_row(concat({name, cell(xi), cell(bep)}, episode_cells(sum)));
                ctx.progress("explore_latency_vs_bep", ++done, 2 * xis.size() * beps.size());
            }
        }
    }
    return t;
}

CsvTable explore_latency_vs_snr(const ExperimentConfig& cfg, std::uint64_t seed, const Ctx& ctx) {
    CsvTable t(concat({"series", "xi", "snr_db", "bep"}, kEpisodeColumns));
    const std::uint64_t episode_seed = derive_seed(seed, "episodes");
    const std::pair<const char*, Scheme> series[] = {{"ULL-FT scheme 1", Scheme::fixed_binary},
                                                     {"ULL-FT scheme 2", Scheme::adaptive_multilevel},
                                                     {"URLLC", Scheme::reliable_coded}};
    const auto& xis = *cfg.sweep.xi;
    const auto& snrs = *cfg.sweep.snr_db;
    const std::size_t dims = cfg.model.build().dims();
    std::size_t done = 0;
    for (const auto& [name, scheme] : series) {
        for (const double xi : xis) {
            for (const double db : snrs) {
                const LinkConfig link = with_snr(cfg.link, scheme, db_to_linear(db));
                const ExplorationScenario s = scenario_from(cfg, link, xi);
                const EpisodeSummary sum = run_episodes(s, cfg.episodes, episode_seed, ctx.pool);
                t.add_row(concat({name, cell(xi), cell(db), cell(operating_point(link, dims).p_b)},
                                 episode_cells(sum)));
                ctx.progress("explore_latency_vs_snr", ++done, 3 * xis.size() * snrs.size());
            }
        }
    }
    return t;
}

CsvTable latency_vs_arrival(const ExperimentConfig& cfg, std::uint64_t seed, const Ctx& ctx) {
    CsvTable t(concat({"series", "arrival_rate"}, kEpisodeColumns));
    const std::uint64_t episode_seed = derive_seed(seed, "episodes");
    const auto& sets = *cfg.sweep.path_length_sets;
    const auto& rates = *cfg.sweep.arrival_rate;
    std::size_t done = 0;
    for (const auto& lengths : sets) {
        std::string name = "paths=[";
        for (std::size_t i = 0; i < lengths.size(); ++i) name += (i ? " " : "") + std::to_string(lengths[i]);
        name += "]";
        for (const double rate : rates) {
            ExplorationScenario s = scenario_from(cfg, cfg.link, cfg.exploration.xi);
            s.path_lengths = lengths;
            s.arrival_rate = rate;
            const EpisodeSummary sum = run_episodes(s, cfg.episodes, episode_seed, ctx.pool);
            t.add_row(concat({name, cell(rate)}, episode_cells(sum)));
            ctx.progress("latency_vs_arrival", ++done, sets.size() * rates.size());
        }
    }
    return t;
}

}  // namespace

std::string config_hash(const Json& resolved) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(resolved.dump())));
    return buf;
}

void add_metadata(CsvTable& table, const std::string& command, const Json& resolved,
                  std::uint64_t seed) {
    table.add_meta("tool", std::string("semcom ") + kToolVersion);
    table.add_meta("command", command);
    table.add_meta("config_hash", config_hash(resolved));
    table.add_meta("seed", std::to_string(seed));
    table.add_meta("config", resolved.dump());
}

CsvTable run_experiment(const ExperimentConfig& base, std::uint64_t seed, WorkerPool& pool,
                        const ProgressFn& progress) {
    const Ctx ctx{pool, progress};
    if (base.experiment.empty()) throw ConfigError("no experiment selected");
    ExperimentConfig cfg = resolve_for(base, base.experiment);
    cfg.seed = seed;
    const std::uint64_t s = derive_seed(seed, cfg.experiment);
    const std::string& e = cfg.experiment;
    CsvTable t = e == "acc_vs_bep"               ? acc_vs_bep(cfg, s, ctx)
                 : e == "latency_vs_bep"         ? latency_vs_bep(cfg)
                 : e == "latency_vs_snr"         ? latency_vs_snr(cfg)
                 : e == "acc_vs_views"           ? acc_vs_views_or_retx(cfg, s, ctx, true)
                 : e == "acc_vs_retx"            ? acc_vs_views_or_retx(cfg, s, ctx, false)
                 : e == "explore_latency_vs_bep" ? explore_latency_vs_bep(cfg, s, ctx)
                 : e == "explore_latency_vs_snr" ? explore_latency_vs_snr(cfg, s, ctx)
                                                 : latency_vs_arrival(cfg, s, ctx);
    CsvTable out(t.header());
    add_metadata(out, "simulate " + e, to_json(cfg), seed);
    for (const auto& row : t.rows()) out.add_row(row);
    return out;
}

CsvTable bounds_table(const ExperimentConfig& base, std::uint64_t seed) {
    ExperimentConfig cfg = base;
    cfg.seed = seed;
    SweepSpec& s = cfg.sweep;
    if (!s.bep) s.bep = std::vector<double>{1e-4, 1e-3, 1e-2, 0.1, 0.2, 0.3};
    if (!s.views) s.views = std::vector<std::size_t>{1, 2, 4, 8};
    if (!s.xi) s.xi = std::vector<double>{0.9, 0.95, 0.99};

    std::vector<std::string> header{"bep", "noise_var", "phi", "phi_noisy", "delta_phi_lower",
                                    "delta_phi_upper", "prop2"};
    for (const std::size_t m : *s.views) header.push_back("prop3_m" + std::to_string(m));
    for (const double xi : *s.xi) {
        header.push_back("prop4_xi" + format_double(xi) + "_minus_one");
        header.push_back("prop4_xi" + format_double(xi) + "_minus_two");
    }
    CsvTable t(header);
    add_metadata(t, "bounds", to_json(cfg), seed);

    const GmModel model = cfg.model.build();
    const int bits = cfg.quantization.bits;
    const GmModel q = model.in_quantized_units(cfg.quantization.resolve(model));
    const Hyperplane h = hyperplane_between(q, 0, 1);
    for (const double bep : *s.bep) {
        const double noise = error_variance(bits, bep);
        const MarginReport r = classification_margin(q, h, s.zeta, quantized_variance(noise));
        std::vector<std::string> row{cell(bep),
                                     cell(noise),
                                     cell(r.phi_noiseless),
                                     cell(r.phi),
                                     cell(r.delta_phi_lower),
                                     cell(r.delta_phi_upper),
                                     cell(accuracy_lower_bound(q, h, s.zeta, bits, bep))};
        for (const std::size_t m : *s.views) {
            row.push_back(cell(multiview_accuracy_lower_bound(q, h, s.zeta, bits, bep, m)));
        }
        for (const double xi : *s.xi) {
            row.push_back(cell(required_transmissions(q, h, s.zeta, bits, bep, xi,
                                                      RetransmissionVariant::minus_one)));
            row.push_back(cell(required_transmissions(q, h, s.zeta, bits, bep, xi,
                                                      RetransmissionVariant::minus_two)));
        }
        t.add_row(std::move(row));
    }
    return t;
}

}  // namespace semcom
