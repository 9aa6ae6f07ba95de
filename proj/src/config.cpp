#include "semcom/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "semcom/errors.hpp"

namespace semcom {

namespace {

// Tracks which keys of an object were consumed so leftovers can be reported.
class Reader {
public:
    Reader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }

    template <class T>
    std::optional<T> opt(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return convert<T>(j_.at(key), key);
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        auto v = opt<T>(key);
        return v ? std::move(*v) : std::move(fallback);
    }

    template <class T>
    T req(const std::string& key) {
        auto v = opt<T>(key);
        if (!v) throw ConfigError(where_ + ": missing required key \"" + key + "\"");
        return std::move(*v);
    }

    const Json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    std::string path(const std::string& key) const { return where_ + "." + key; }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.contains(key)) {
                throw ConfigError("unknown key \"" + key + "\" in " + where_);
            }
        }
    }

private:
    template <class T>
    T convert(const Json& v, const std::string& key) const {
        if constexpr (std::is_same_v<T, std::uint64_t> || std::is_same_v<T, std::size_t>) {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
                throw ConfigError(where_ + "." + key + ": expected a non-negative integer");
            }
        }
        try {
            return v.get<T>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigError(where_ + "." + key + ": wrong type");
        }
    }

    const Json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

Scheme parse_scheme(const std::string& s) {
    if (s == "fixed_binary") return Scheme::fixed_binary;
    if (s == "adaptive_multilevel") return Scheme::adaptive_multilevel;
    if (s == "reliable_coded") return Scheme::reliable_coded;
    throw ConfigError("link.scheme: unknown scheme \"" + s + "\"");
}

Enhancement parse_enhancement(const std::string& s) {
    if (s == "none") return Enhancement::none;
    if (s == "multiview") return Enhancement::multiview;
    if (s == "retransmission") return Enhancement::retransmission;
    throw ConfigError("exploration.enhancement: unknown value \"" + s + "\"");
}

std::string enhancement_name(Enhancement e) {
    switch (e) {
    case Enhancement::none: return "none";
    case Enhancement::multiview: return "multiview";
    case Enhancement::retransmission: return "retransmission";
    }
    return "none";
}

RetransmissionVariant parse_variant(const std::string& s) {
    if (s == "minus_one") return RetransmissionVariant::minus_one;
    if (s == "minus_two") return RetransmissionVariant::minus_two;
    throw ConfigError("sweep.variant: unknown value \"" + s + "\"");
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

ModelSpec parse_model(const Json& j) {
    Reader r(j, "model");
    ModelSpec m;
    m.preset = r.get<std::string>("preset", m.preset);
    m.dims = r.get<std::size_t>("dims", m.dims);
    m.amplitude = r.get<double>("amplitude", m.amplitude);
    m.variance = r.get<double>("variance", m.variance);
    m.centroids = r.get<std::vector<std::vector<double>>>("centroids", {});
    m.covariance_diag = r.get<std::vector<double>>("covariance_diag", {});
    r.finish();
    if (m.preset != "binary" && m.preset != "ten_class" && m.preset != "custom") {
        throw ConfigError("model.preset: unknown preset \"" + m.preset + "\"");
    }
    if (m.preset == "custom" && (m.centroids.empty() || m.covariance_diag.empty())) {
        throw ConfigError("model: custom preset needs centroids and covariance_diag");
    }
    m.build();
    return m;
}

QuantizationSpec parse_quantization(const Json& j) {
    Reader r(j, "quantization");
    QuantizationSpec q;
    q.bits = r.get<int>("bits", q.bits);
    q.headroom_sigmas = r.get<double>("headroom_sigmas", q.headroom_sigmas);
    q.scale = r.opt<double>("scale");
    r.finish();
    if (q.bits < 2 || q.bits > 16) throw ConfigError("quantization.bits must lie in [2, 16]");
    if (q.scale && !(*q.scale > 0.0)) throw ConfigError("quantization.scale must be positive");
    return q;
}

LinkConfig parse_link(const Json& j, const std::filesystem::path& base, int bits) {
    Reader r(j, "link");
    LinkConfig l;
    l.scheme = parse_scheme(r.get<std::string>("scheme", "fixed_binary"));
    const auto snr_db = r.opt<double>("snr_db");
    const auto snr_lin = r.opt<double>("snr_linear");
    if (snr_db && snr_lin) throw ConfigError("link: give snr_db or snr_linear, not both");
    if (snr_db) l.snr_linear = std::pow(10.0, *snr_db / 10.0);
    if (snr_lin) l.snr_linear = *snr_lin;
    l.bep = r.opt<double>("bep");
    if (l.bep && l.snr_linear) throw ConfigError("link: give an SNR or a bep, not both");
    l.bandwidth_hz = r.get<double>("bandwidth_hz", l.bandwidth_hz);
    l.packet_error_target = r.get<double>("packet_error_target", l.packet_error_target);
    const std::string rel = r.get<std::string>("reliability", "packet");
    if (rel == "packet") {
        l.reliability = ReliabilityTarget::packet;
    } else if (rel == "bit") {
        l.reliability = ReliabilityTarget::bit;
    } else {
        throw ConfigError("link.reliability: expected \"packet\" or \"bit\"");
    }
    if (r.has("modulation_policy")) l.modulation_policy = parse_modulation_policy(r.raw("modulation_policy"));
    if (auto file = r.opt<std::string>("modulation_policy_file")) {
        l.modulation_policy = load_modulation_policy(resolve_path(base, *file));
    }
    r.finish();
    l.bits_per_feature = bits;
    validate_policy(l.modulation_policy);
    return l;
}

Json link_to_json(const LinkConfig& l) {
    Json j;
    j["scheme"] = to_string(l.scheme);
    if (l.snr_linear) j["snr_linear"] = *l.snr_linear;
    if (l.bep) j["bep"] = *l.bep;
    j["bandwidth_hz"] = l.bandwidth_hz;
    j["packet_error_target"] = l.packet_error_target;
    j["reliability"] = l.reliability == ReliabilityTarget::packet ? "packet" : "bit";
    Json policy = Json::array();
    for (const auto& s : l.modulation_policy) policy.push_back({{"snr_db", s.snr_db}, {"M", s.constellation}});
    j["modulation_policy"] = policy;
    return j;
}

Json model_to_json(const ModelSpec& m) {
    Json j{{"preset", m.preset}, {"dims", m.dims}, {"amplitude", m.amplitude}, {"variance", m.variance}};
    if (m.preset == "custom") {
        j["centroids"] = m.centroids;
        j["covariance_diag"] = m.covariance_diag;
    }
    return j;
}

Json quantization_to_json(const QuantizationSpec& q) {
    Json j{{"bits", q.bits}, {"headroom_sigmas", q.headroom_sigmas}};
    if (q.scale) j["scale"] = *q.scale;
    return j;
}

ExplorationSpec parse_exploration(const Json& j) {
    Reader r(j, "exploration");
    ExplorationSpec e;
    e.arrival_rate = r.get<double>("arrival_rate", e.arrival_rate);
    e.num_objects = r.get<std::size_t>("num_objects", e.num_objects);
    e.relevant_fraction = r.get<double>("relevant_fraction", e.relevant_fraction);
    e.path_lengths = r.get<std::vector<std::size_t>>("path_lengths", e.path_lengths);
    e.max_views_per_object = r.get<std::size_t>("max_views_per_object", e.max_views_per_object);
    e.time_limit_s = r.get<double>("time_limit_s", e.time_limit_s);
    e.enhancement = parse_enhancement(r.get<std::string>("enhancement", "multiview"));
    e.xi = r.get<double>("xi", e.xi);
    r.finish();
    return e;
}

SweepSpec parse_sweep(const Json& j) {
    Reader r(j, "sweep");
    SweepSpec s;
    s.bep = r.opt<std::vector<double>>("bep");
    s.snr_db = r.opt<std::vector<double>>("snr_db");
    s.amplitudes = r.opt<std::vector<double>>("amplitudes");
    s.views = r.opt<std::vector<std::size_t>>("views");
    s.transmissions = r.opt<std::vector<std::size_t>>("transmissions");
    s.xi = r.opt<std::vector<double>>("xi");
    s.arrival_rate = r.opt<std::vector<double>>("arrival_rate");
    s.path_length_sets = r.opt<std::vector<std::vector<std::size_t>>>("path_length_sets");
    s.zeta = r.get<double>("zeta", s.zeta);
    s.variant = parse_variant(r.get<std::string>("variant", "minus_one"));
    r.finish();
    if (!(s.zeta > 0.0 && s.zeta < 1.0)) throw ConfigError("sweep.zeta must lie in (0, 1)");
    return s;
}

template <class T>
void fill(std::optional<T>& slot, T value) {
    if (!slot) slot = std::move(value);
}

}  // namespace

GmModel ModelSpec::build() const { return build_with_amplitude(amplitude); }

GmModel ModelSpec::build_with_amplitude(double a) const {
    if (preset == "binary") return make_binary_model(dims, a, variance);
    if (preset == "ten_class") return make_ten_class_model(dims, a, variance);
    const auto classes = static_cast<Eigen::Index>(centroids.size());
    const auto d = static_cast<Eigen::Index>(covariance_diag.size());
    Eigen::MatrixXd mu(d, classes);
    for (Eigen::Index l = 0; l < classes; ++l) {
        if (static_cast<Eigen::Index>(centroids[static_cast<std::size_t>(l)].size()) != d) {
            throw ConfigError("model: centroid " + std::to_string(l) + " has the wrong length");
        }
        for (Eigen::Index i = 0; i < d; ++i) mu(i, l) = centroids[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd cov(d);
    for (Eigen::Index i = 0; i < d; ++i) cov[i] = covariance_diag[static_cast<std::size_t>(i)];
    return GmModel(std::move(mu), std::move(cov));
}

double QuantizationSpec::resolve(const GmModel& model) const {
    return scale ? *scale : default_scale(model, bits, headroom_sigmas);
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{
        "acc_vs_bep",     "latency_vs_bep",          "latency_vs_snr",         "acc_vs_views",
        "acc_vs_retx",    "explore_latency_vs_bep", "explore_latency_vs_snr", "latency_vs_arrival"};
    return names;
}

ModulationPolicy parse_modulation_policy(const Json& doc) {
    const Json* list = &doc;
    std::optional<Reader> r;
    if (doc.is_object()) {
        r.emplace(doc, "modulation_policy");
        if (r->get<int>("version", 1) != 1) throw ConfigError("modulation_policy: unsupported version");
        list = &r->raw("policy");
        r->finish();
    }
    if (!list->is_array()) throw ConfigError("modulation_policy: expected a list of {snr_db, M}");
    ModulationPolicy policy;
    for (const auto& item : *list) {
        Reader step(item, "modulation_policy[]");
        policy.push_back({step.req<double>("snr_db"), step.req<int>("M")});
        step.finish();
    }
    validate_policy(policy);
    return policy;
}

ModulationPolicy load_modulation_policy(const std::filesystem::path& path) {
    return parse_modulation_policy(read_json_file(path));
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

ExperimentConfig parse_experiment_config(const Json& doc, const std::filesystem::path& base_dir) {
    Reader r(doc, "config");
    ExperimentConfig cfg;
    cfg.experiment = r.get<std::string>("experiment", "");
    cfg.experiments = r.get<std::vector<std::string>>("experiments", {});
    cfg.seed = r.opt<std::uint64_t>("seed");
    if (r.has("model")) cfg.model = parse_model(r.raw("model"));
    if (r.has("quantization")) cfg.quantization = parse_quantization(r.raw("quantization"));
    cfg.link.bits_per_feature = cfg.quantization.bits;
    if (r.has("link")) cfg.link = parse_link(r.raw("link"), base_dir, cfg.quantization.bits);
    if (r.has("exploration")) cfg.exploration = parse_exploration(r.raw("exploration"));
    if (r.has("sweep")) cfg.sweep = parse_sweep(r.raw("sweep"));
    cfg.trials = r.get<std::size_t>("trials", cfg.trials);
    cfg.episodes = r.get<std::size_t>("episodes", cfg.episodes);
    r.finish();

    const auto& names = experiment_names();
    auto known = [&](const std::string& n) { return std::find(names.begin(), names.end(), n) != names.end(); };
    if (!cfg.experiment.empty() && !known(cfg.experiment)) {
        throw ConfigError("unknown experiment \"" + cfg.experiment + "\"");
    }
    for (const auto& e : cfg.experiments) {
        if (!known(e)) throw ConfigError("unknown experiment \"" + e + "\"");
    }
    if (cfg.trials < 1) throw ConfigError("config.trials must be >= 1");
    if (cfg.episodes < 1) throw ConfigError("config.episodes must be >= 1");
    return cfg;
}

ExperimentConfig resolve_for(const ExperimentConfig& base, const std::string& name) {
    ExperimentConfig cfg = base;
    cfg.experiment = name;
    cfg.experiments.clear();
    SweepSpec& s = cfg.sweep;
    if (name == "acc_vs_bep") {
        fill(s.bep, std::vector<double>{0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5});
        fill(s.amplitudes, std::vector<double>{1.0, 2.0, 3.0});
    } else if (name == "latency_vs_bep") {
        fill(s.bep, std::vector<double>{1e-4, 1e-3, 0.01, 0.05, 0.1, 0.2, 0.3, 0.35, 0.4, 0.45});
    } else if (name == "latency_vs_snr" || name == "explore_latency_vs_snr") {
        fill(s.snr_db, std::vector<double>{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0});
        if (name == "explore_latency_vs_snr") fill(s.xi, std::vector<double>{0.9, 0.95, 0.99});
    } else if (name == "acc_vs_views") {
        fill(s.bep, std::vector<double>{0.1, 0.3, 0.4});
        fill(s.views, std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7, 8});
    } else if (name == "acc_vs_retx") {
        fill(s.bep, std::vector<double>{0.1, 0.3, 0.4});
        fill(s.transmissions, std::vector<std::size_t>{1, 2, 3, 4, 5, 6, 7, 8});
    } else if (name == "explore_latency_vs_bep") {
        fill(s.bep, std::vector<double>{1e-3, 0.01, 0.05, 0.1, 0.2, 0.3, 0.35, 0.4});
        fill(s.xi, std::vector<double>{0.9, 0.95, 0.99});
    } else if (name == "latency_vs_arrival") {
        fill(s.arrival_rate, std::vector<double>{0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 1000.0});
        fill(s.path_length_sets, std::vector<std::vector<std::size_t>>{{3}, {10, 10, 10}});
    } else {
        throw ConfigError("unknown experiment \"" + name + "\"");
    }
    return cfg;
}

Json to_json(const ExperimentConfig& cfg) {
    Json j;
    j["experiment"] = cfg.experiment;
    if (!cfg.experiments.empty()) j["experiments"] = cfg.experiments;
    if (cfg.seed) j["seed"] = *cfg.seed;
    j["model"] = model_to_json(cfg.model);
    j["quantization"] = quantization_to_json(cfg.quantization);
    j["link"] = link_to_json(cfg.link);
    const ExplorationSpec& e = cfg.exploration;
    j["exploration"] = {{"arrival_rate", e.arrival_rate},
                        {"num_objects", e.num_objects},
                        {"relevant_fraction", e.relevant_fraction},
                        {"path_lengths", e.path_lengths},
                        {"max_views_per_object", e.max_views_per_object},
                        {"time_limit_s", e.time_limit_s},
                        {"enhancement", enhancement_name(e.enhancement)},
                        {"xi", e.xi}};
    Json s;
    const SweepSpec& w = cfg.sweep;
    if (w.bep) s["bep"] = *w.bep;
    if (w.snr_db) s["snr_db"] = *w.snr_db;
    if (w.amplitudes) s["amplitudes"] = *w.amplitudes;
    if (w.views) s["views"] = *w.views;
    if (w.transmissions) s["transmissions"] = *w.transmissions;
    if (w.xi) s["xi"] = *w.xi;
    if (w.arrival_rate) s["arrival_rate"] = *w.arrival_rate;
    if (w.path_length_sets) s["path_length_sets"] = *w.path_length_sets;
    s["zeta"] = w.zeta;
    s["variant"] = w.variant == RetransmissionVariant::minus_one ? "minus_one" : "minus_two";
    j["sweep"] = s;
    j["trials"] = cfg.trials;
    j["episodes"] = cfg.episodes;
    return j;
}

KnowledgeGraph parse_knowledge_graph(const Json& doc) {
    Reader r(doc, "knowledge_graph");
    KnowledgeGraph kg;
    for (const auto& v : r.req<std::vector<std::string>>("vertices")) kg.add_vertex(v);
    const Json& arcs = r.raw("arcs");
    if (!arcs.is_array()) throw ConfigError("knowledge_graph.arcs: expected a list");
    for (const auto& a : arcs) {
        Reader ar(a, "knowledge_graph.arcs[]");
        const auto from = ar.req<std::string>("from");
        const auto action = ar.req<std::string>("action");
        const auto to = ar.req<std::string>("to");
        ar.finish();
        kg.add_arc(from, action, to);
    }
    r.finish();
    return kg;
}

ClassifierSetup ProtocolDemoConfig::classifier() const {
    GmModel m = model.build();
    const double scale = quantization.resolve(m);
    return {std::move(m), class_names, link, scale};
}

ProtocolDemoConfig parse_protocol_config(const Json& doc, const std::filesystem::path& base_dir) {
    Reader r(doc, "config");
    ProtocolDemoConfig cfg;
    cfg.seed = r.opt<std::uint64_t>("seed");

    const Json& kg = r.raw("knowledge_graph");
    cfg.kg = kg.is_string() ? parse_knowledge_graph(read_json_file(resolve_path(base_dir, kg.get<std::string>())))
                            : parse_knowledge_graph(kg);

    {
        Reader t(r.raw("task"), "task");
        cfg.task.start = t.get<std::string>("start", "");
        cfg.task.goal = t.get<std::string>("goal", "");
        cfg.task.explicit_paths = t.get<std::vector<std::vector<std::string>>>("paths", {});
        t.finish();
        if (cfg.task.explicit_paths.empty() && (cfg.task.start.empty() || cfg.task.goal.empty())) {
            throw ConfigError("task: give start and goal, or paths");
        }
    }

    cfg.class_names = r.req<std::vector<std::string>>("classes");
    if (r.has("model")) cfg.model = parse_model(r.raw("model"));
    if (r.has("quantization")) cfg.quantization = parse_quantization(r.raw("quantization"));
    cfg.link.bits_per_feature = cfg.quantization.bits;
    if (r.has("link")) cfg.link = parse_link(r.raw("link"), base_dir, cfg.quantization.bits);
    if (cfg.class_names.size() != cfg.model.build().num_classes()) {
        throw ConfigError("classes: expected one name per model class");
    }

    {
        Reader e(r.raw("environment"), "environment");
        cfg.environment.arrival_rate = e.get<double>("arrival_rate", 1.0);
        const Json& objs = e.raw("objects");
        if (!objs.is_array()) throw ConfigError("environment.objects: expected a list");
        for (const auto& o : objs) {
            Reader orr(o, "environment.objects[]");
            EnvironmentObject obj;
            obj.name = orr.req<std::string>("name");
            const auto cls = orr.get<std::string>("class", obj.name);
            orr.finish();
            const auto it = std::find(cfg.class_names.begin(), cfg.class_names.end(), cls);
            if (it == cfg.class_names.end()) {
                throw ConfigError("environment: object \"" + obj.name + "\" has unknown class \"" + cls + "\"");
            }
            obj.true_class = static_cast<std::size_t>(it - cfg.class_names.begin());
            cfg.environment.objects.push_back(std::move(obj));
        }
        e.finish();
    }

    if (r.has("matching")) {
        Reader m(r.raw("matching"), "matching");
        const auto provider = m.get<std::string>("provider", "trigram_hash");
        const auto synonyms = m.get<std::map<std::string, std::string>>("synonyms", {});
        cfg.protocol.match.provider = make_embedding_provider(provider, synonyms);
        const auto metric = m.get<std::string>("metric", "cosine");
        if (metric == "cosine") {
            cfg.protocol.match.metric = DistanceMetric::cosine;
        } else if (metric == "euclidean") {
            cfg.protocol.match.metric = DistanceMetric::euclidean;
        } else {
            throw ConfigError("matching.metric: expected \"cosine\" or \"euclidean\"");
        }
        cfg.protocol.match.epsilon = m.get<double>("epsilon", cfg.protocol.match.epsilon);
        m.finish();
        cfg.protocol.match.validate();
    }
    const auto mode = r.get<std::string>("feasibility", "subset");
    if (mode == "subset") {
        cfg.protocol.feasibility = FeasibilityMode::subset;
    } else if (mode == "intersect") {
        cfg.protocol.feasibility = FeasibilityMode::intersect;
    } else {
        throw ConfigError("feasibility: expected \"subset\" or \"intersect\"");
    }
    cfg.protocol.xi = r.get<double>("xi", cfg.protocol.xi);
    cfg.protocol.max_depth = r.get<std::size_t>("max_depth", cfg.protocol.max_depth);
    cfg.protocol.max_paths = r.get<std::size_t>("max_paths", cfg.protocol.max_paths);
    cfg.protocol.max_views = r.get<std::size_t>("max_views", cfg.protocol.max_views);
    cfg.protocol.time_limit_s = r.get<double>("time_limit_s", cfg.protocol.time_limit_s);
    r.finish();

    cfg.resolved = doc;
    cfg.resolved["model"] = model_to_json(cfg.model);
    cfg.resolved["quantization"] = quantization_to_json(cfg.quantization);
    cfg.resolved["link"] = link_to_json(cfg.link);
    cfg.resolved["feasibility"] = mode;
    cfg.resolved["xi"] = cfg.protocol.xi;
    return cfg;
}

}  // namespace semcom
