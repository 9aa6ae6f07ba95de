#include <doctest.h>

#include <map>
#include <sstream>
#include <string>

#include "semcom/config.hpp"
#include "semcom/experiments.hpp"

using namespace semcom;

namespace {

ExperimentConfig small(const std::string& experiment) {
    ExperimentConfig c = parse_experiment_config(Json::parse(R"({
        "model": {"preset": "binary", "dims": 100, "amplitude": 1.0},
        "link": {"bep": 0.01},
        "exploration": {"num_objects": 40},
        "trials": 2000,
        "episodes": 200
    })"));
    c.experiment = experiment;
    return c;
}

std::map<std::string, std::vector<double>> column_by_series(const CsvTable& t, const std::string& col) {
    std::size_t idx = 0;
    while (t.header()[idx] != col) ++idx;
    std::map<std::string, std::vector<double>> out;
    for (const auto& row : t.rows()) out[row[0]].push_back(std::stod(row[idx]));
    return out;
}

}  // namespace

TEST_CASE("every experiment is byte-identical across worker counts") {
    WorkerPool one(1);
    WorkerPool three(3);
    for (const auto& name : experiment_names()) {
        CAPTURE(name);
        const ExperimentConfig c = small(name);
        CHECK(run_experiment(c, 42, one).str() == run_experiment(c, 42, three).str());
    }
}

TEST_CASE("output starts with the metadata block") {
    WorkerPool pool(1);
    const std::string csv = run_experiment(small("latency_vs_bep"), 42, pool).str();
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == std::string("# tool: semcom ") + kToolVersion);
    std::getline(in, line);
    CHECK(line == "# command: simulate latency_vs_bep");
    std::getline(in, line);
    CHECK(line.rfind("# config_hash: ", 0) == 0);
    std::getline(in, line);
    CHECK(line == "# seed: 42");
    std::getline(in, line);
    CHECK(line.rfind("# config: {", 0) == 0);
    std::getline(in, line);
    CHECK(line == "series,bep,snr_linear,latency_s");
}

TEST_CASE("latency versus BEP: flat ULL-FT, rising URLLC") {
    WorkerPool pool(1);
    const CsvTable t = run_experiment(small("latency_vs_bep"), 1, pool);
    const auto lat = column_by_series(t, "latency_s");
    for (double v : lat.at("ULL-FT")) CHECK(v == 8e-4);
    const auto& u = lat.at("URLLC");
    for (std::size_t i = 1; i < u.size(); ++i) CHECK(u[i] >= u[i - 1]);
}

TEST_CASE("accuracy versus BEP: non-increasing with a plateau") {
    WorkerPool pool(1);
    const CsvTable t = run_experiment(small("acc_vs_bep"), 1, pool);
    const auto acc = column_by_series(t, "accuracy");
    const auto ci = column_by_series(t, "ci_half_width");
    CHECK(acc.size() == 3);
    for (const auto& [series, v] : acc) {
        CAPTURE(series);
        CHECK(v[0] == v[1]);
        for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] <= v[i - 1] + 2.0 * ci.at(series)[i] + 1e-12);
    }
}

TEST_CASE("latency versus arrival rate: short path is faster") {
    WorkerPool pool(2);
    const CsvTable t = run_experiment(small("latency_vs_arrival"), 1, pool);
    const auto total = column_by_series(t, "mean_total_s");
    const auto& a = total.at("paths=[3]");
    const auto& b = total.at("paths=[10 10 10]");
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] < b[i]);
        if (i > 0) CHECK(a[i] <= a[i - 1]);
    }
}

TEST_CASE("bounds table shape") {
    const CsvTable t = bounds_table(small(""), 7);
    CHECK(t.rows().size() == 6);
    CHECK(t.header().size() == 7 + 4 + 6);
    CHECK(t.header()[7] == "prop3_m1");
    CHECK(t.header().back() == "prop4_xi0.99_minus_two");
}

TEST_CASE("config hash is stable and sensitive") {
    const Json a = to_json(small("acc_vs_bep"));
    Json b = a;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b["trials"] = 2001;
    CHECK(config_hash(a) != config_hash(b));
}
