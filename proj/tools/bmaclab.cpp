// bmaclab: rate regions and sequential-decoder simulations for the
// pure-interference bosonic multiple access channel.
//
// Commands: region, map, simulate, verify. All outputs are deterministic
// for a fixed configuration and seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bmac/coherent.hpp"
#include "bmac/discrete_mac.hpp"
#include "bmac/fock.hpp"
#include "bmac/gram_decoder.hpp"
#include "bmac/io.hpp"
#include "bmac/lemmas.hpp"
#include "bmac/rates.hpp"
#include "bmac/typicality.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct CommonOpts {
    std::string out;
    std::string format;   // "" = command default
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string config;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--out", c.out, "Output path (default: stdout)");
    cmd->add_option("--format", c.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", c.seed, "Random seed");
    cmd->add_option("--threads", c.threads, "Worker cap (results unchanged)");
    cmd->add_option("--config", c.config, "JSON config mirroring the flags");
}

// Applies config-file values to options the user did not pass explicitly.
void apply_config(CLI::App* cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bmac::usage_error("cannot open config file: " + path);
    json cfg = json::parse(in);
    for (auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        CLI::Option* opt = cmd->get_option_no_throw(flag);
        if (opt == nullptr)
            throw bmac::usage_error("config key not recognized: " + key);
        if (opt->count() > 0) continue;   // explicit flags win
        std::vector<std::string> args;
        if (value.is_array())
            for (const auto& v : value) args.push_back(v.dump());
        else if (value.is_string())
            args.push_back(value.get<std::string>());
        else
            args.push_back(value.dump());
        opt->add_result(args);
        opt->run_callback();
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw bmac::usage_error("cannot open output file: " + path);
    return f;
}

void emit(const std::string& out, const std::string& payload) {
    if (out.empty()) {
        std::cout << payload;
    } else {
        auto f = open_out(out);
        f << payload;
    }
}

std::string json_payload(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- region --

struct RegionArgs {
    CommonOpts common;
    double eta = 0.5;
    double nsa = 1.0;
    double nsb = 1.0;
};

json polygon_json(const bmac::rates::PolygonRegion& poly) {
    json verts = json::array();
    for (const auto& v : poly.vertices) verts.push_back({v.r1, v.r2});
    return verts;
}

int run_region(const RegionArgs& a) {
    using namespace bmac::rates;
    const ChannelParams p{a.eta, a.nsa, a.nsb};
    p.validate();
    const auto [seq1, seq2] = seq_regions(p);
    const std::vector<std::pair<std::string, PolygonRegion>> regions{
        {"yen_shapiro", region_geometry(yen_shapiro_region(p))},
        {"min_entropy_1", region_geometry(seq1)},
        {"min_entropy_2", region_geometry(seq2)},
        {"hull", hull_region(seq1, seq2)},
        {"baseline_heterodyne",
         region_geometry(baseline_region(p, BaselineKind::heterodyne))},
        {"baseline_homodyne",
         region_geometry(baseline_region(p, BaselineKind::homodyne))},
    };
    if (a.common.format == "json") {
        json out{{"eta", a.eta}, {"nsa", a.nsa}, {"nsb", a.nsb}};
        out["regions"] = json::array();
        for (const auto& [name, poly] : regions)
            out["regions"].push_back(
                {{"name", name}, {"vertices", polygon_json(poly)}});
        emit(a.common.out, json_payload(out));
        return kExitOk;
    }
    std::ostringstream os;
    bmac::CsvWriter csv(os);
    csv.row({"region", "vertex_index", "r1_bits", "r2_bits"});
    for (const auto& [name, poly] : regions)
        for (std::size_t i = 0; i < poly.vertices.size(); ++i)
            csv.row({name, std::to_string(i),
                     bmac::format_sig(poly.vertices[i].r1),
                     bmac::format_sig(poly.vertices[i].r2)});
    emit(a.common.out, os.str());
    return kExitOk;
}

// ------------------------------------------------------------------- map --

struct MapArgs {
    CommonOpts common;
    std::vector<double> etas;
    double min = 0.0;
    double max = 20.0;
    int steps = 50;
};

int run_map(const MapArgs& a) {
    using namespace bmac::rates;
    const std::vector<double> etas =
        a.etas.empty() ? std::vector<double>{0.5, 0.8} : a.etas;
    if (a.steps < 2) throw bmac::usage_error("map: --steps must be >= 2");
    if (!(a.max > a.min) || a.min < 0.0)
        throw bmac::usage_error("map: need 0 <= min < max");
    if (etas.size() > 1 && a.common.out.empty())
        throw bmac::usage_error(
            "map: multiple eta values write one file each; pass --out");

    std::vector<std::pair<double, double>> grid;
    grid.reserve(static_cast<std::size_t>(a.steps) * a.steps);
    auto coord = [&](int i) {
        return a.min + (a.max - a.min) * double(i) / double(a.steps - 1);
    };
    for (int i = 0; i < a.steps; ++i)
        for (int j = 0; j < a.steps; ++j)
            grid.push_back({coord(i), coord(j)});

    auto out_path = [&](double eta) {
        if (etas.size() == 1) return a.common.out;
        const auto dot = a.common.out.rfind('.');
        const std::string stem =
            dot == std::string::npos ? a.common.out : a.common.out.substr(0, dot);
        const std::string ext =
            dot == std::string::npos ? "" : a.common.out.substr(dot);
        return stem + "_eta" + bmac::format_sig(eta) + ext;
    };

    for (double eta : etas) {
        const auto rows = equality_map(eta, grid);
        std::string payload;
        if (a.common.format == "json") {
            json out{{"eta", eta}};
            out["rows"] = json::array();
            for (const auto& r : rows)
                out["rows"].push_back({r.nsa, r.nsb, r.equal ? 1 : 0});
            payload = json_payload(out);
        } else {
            std::ostringstream os;
            bmac::CsvWriter csv(os);
            csv.row({"nsa", "nsb", "equal"});
            for (const auto& r : rows)
                csv.row({bmac::format_sig(r.nsa), bmac::format_sig(r.nsb),
                         r.equal ? "1" : "0"});
            payload = os.str();
        }
        emit(out_path(eta), payload);
    }
    return kExitOk;
}

// -------------------------------------------------------------- simulate --

struct SimulateArgs {
    CommonOpts common;
    std::string mode = "bosonic";
    double eta = 0.5;
    double nsa = 1.0;
    double nsb = 1.0;
    std::vector<double> rates;
    std::vector<int> n_values{2};
    int codebooks = 100;
    int trials = 20;
    int cap = 4096;
    std::string mac_path;
};

json bosonic_report(const SimulateArgs& a, int n,
                    const bmac::ErrorEstimate& est) {
    return json{
        {"params", {{"eta", a.eta}, {"nsa", a.nsa}, {"nsb", a.nsb}}},
        {"rates", {a.rates[0], a.rates[1]}},
        {"n", n},
        {"K", est.l_count * est.m_count},
        {"error_mean", est.mean},
        {"error_stderr", est.stderr_},
        {"sen_bound_violations", est.sen_bound_violations},
        {"resampled_instances", est.resampled_instances},
        {"samples", est.samples},
        {"realized_rates",
         {std::log2(double(est.l_count)) / n, std::log2(double(est.m_count)) / n}},
        {"codebooks", a.codebooks},
        {"trials", a.trials},
        {"seed", a.common.seed}};
}

json discrete_report(const SimulateArgs& a, int n,
                     const bmac::ErrorEstimate& est) {
    return json{
        {"params", {{"mac", a.mac_path}}},
        {"rates", {a.rates[0], a.rates[1]}},
        {"n", n},
        {"K", est.l_count * est.m_count},
        {"error_mean", est.mean},
        {"error_stderr", est.stderr_},
        {"sen_bound_violations", est.sen_bound_violations},
        {"samples", est.samples},
        {"realized_rates",
         {std::log2(double(est.l_count)) / n, std::log2(double(est.m_count)) / n}},
        {"codebooks", a.codebooks},
        {"trials", a.trials},
        {"seed", a.common.seed}};
}

std::string report_csv(const std::vector<json>& reports) {
    std::ostringstream os;
    bmac::CsvWriter csv(os);
    csv.row({"n", "K", "error_mean", "error_stderr", "sen_bound_violations",
             "samples"});
    for (const auto& r : reports)
        csv.row({std::to_string(r.at("n").get<int>()),
                 std::to_string(r.at("K").get<long>()),
                 bmac::format_sig(r.at("error_mean").get<double>()),
                 bmac::format_sig(r.at("error_stderr").get<double>()),
                 std::to_string(r.at("sen_bound_violations").get<long>()),
                 std::to_string(r.at("samples").get<long>())});
    return os.str();
}

int run_simulate(const SimulateArgs& a) {
    if (a.rates.size() != 2)
        throw bmac::usage_error("simulate: --rates takes exactly R1 R2");
    if (a.n_values.empty())
        throw bmac::usage_error("simulate: need at least one --n value");

    std::vector<json> reports;
    std::vector<bmac::ErrorEstimate> estimates;
    if (a.mode == "bosonic") {
        const bmac::rates::ChannelParams p{a.eta, a.nsa, a.nsb};
        for (int n : a.n_values) {
            const auto est = bmac::gram::monte_carlo_error(
                p, {a.rates[0], a.rates[1]}, n, a.codebooks, a.trials,
                a.common.seed,
                bmac::gram::McOptions{.max_pair_cap = a.cap,
                                      .threads = a.common.threads});
            estimates.push_back(est);
            reports.push_back(bosonic_report(a, n, est));
        }
    } else if (a.mode == "discrete") {
        if (a.mac_path.empty())
            throw bmac::usage_error("simulate: --mac FILE required in discrete mode");
        std::ifstream in(a.mac_path);
        if (!in) throw bmac::usage_error("cannot open MAC file: " + a.mac_path);
        const auto mac = json::parse(in).get<bmac::dmac::PureStateMAC>();
        const auto dists = bmac::dmac::uniform_dists(mac);
        for (int n : a.n_values) {
            const auto est = bmac::dmac::simulate_sequential(
                mac, dists, {a.rates[0], a.rates[1]}, n, a.codebooks,
                a.common.seed,
                bmac::dmac::SimOptions{.trials_per_codebook = a.trials,
                                       .threads = a.common.threads});
            estimates.push_back(est);
            reports.push_back(discrete_report(a, n, est));
        }
    } else {
        throw bmac::usage_error("simulate: unknown mode " + a.mode);
    }

    json out;
    if (reports.size() == 1) {
        out = reports[0];
    } else {
        out["reports"] = reports;
        bool decreasing = true;
        for (std::size_t i = 0; i + 1 < estimates.size(); ++i)
            decreasing = decreasing &&
                         bmac::dmac::significantly_greater(estimates[i],
                                                           estimates[i + 1]);
        out["trend"] = {{"metric", "error_mean decreasing in n"},
                        {"confidence", 0.95},
                        {"pass", decreasing},
                        {"flag", decreasing ? "PASS" : "FAIL"}};
    }
    if (a.common.format == "csv")
        emit(a.common.out, report_csv(reports));
    else
        emit(a.common.out, json_payload(out));
    return kExitOk;
}

// ---------------------------------------------------------------- verify --

struct VerifyArgs {
    CommonOpts common;
    std::string suite = "all";
    std::uint64_t samples = 10000;
};

json sweep_json(const bmac::lemmas::SweepReport& rep) {
    json j{{"lemma", rep.lemma},
           {"samples", rep.samples},
           {"violations", rep.violations},
           {"worst_margin", rep.worst_margin},
           {"seed", rep.seed},
           {"max_dim", rep.max_dim}};
    if (!rep.failure_artifacts.empty()) j["failures"] = rep.failure_artifacts;
    return j;
}

json verify_lemmas(std::uint64_t samples, std::uint64_t seed,
                   std::uint64_t& violations) {
    using namespace bmac::lemmas;
    json out = json::array();
    for (const auto& rep :
         {sweep_gentle_operator(samples, seed), sweep_gentle_ensemble(samples, seed),
          sweep_trace_inequality(samples, seed),
          sweep_union_bound(samples, seed)}) {
        violations += rep.violations;
        out.push_back(sweep_json(rep));
    }
    return out;
}

json verify_typicality(std::uint64_t& violations) {
    using namespace bmac::typ;
    json records = json::array();
    // battery of qubit/qutrit instances, n <= 8
    struct Instance {
        std::vector<double> spectrum;
        int n;
        double delta;
    };
    const std::vector<Instance> battery{
        {{0.5, 0.5}, 8, 0.1},       {{0.75, 0.25}, 8, 0.35},
        {{0.8, 0.2}, 8, 0.15},      {{0.89, 0.11}, 6, 0.2},
        {{0.6, 0.3, 0.1}, 6, 0.25}, {{0.5, 0.3, 0.2}, 8, 0.3},
        {{1.0, 0.0}, 8, 0.2},
    };
    for (const auto& inst : battery) {
        const int d = static_cast<int>(inst.spectrum.size());
        bmac::Matrix rho = bmac::Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i) rho(i, i) = inst.spectrum[i];
        const auto tp = typical_projector(rho, inst.n, inst.delta);
        if (!tp.diag.rank_bound_holds || !tp.diag.sandwich_holds) ++violations;
        records.push_back({{"property", "rank_and_sandwich"},
                           {"n", inst.n},
                           {"delta", inst.delta},
                           {"rank", tp.diag.rank},
                           {"rank_bound", tp.diag.rank_bound},
                           {"mass", tp.diag.mass},
                           {"min_typical_eig", tp.diag.min_typical_eig},
                           {"max_typical_eig", tp.diag.max_typical_eig},
                           {"eig_lower", tp.diag.eig_lower},
                           {"eig_upper", tp.diag.eig_upper},
                           {"rank_bound_holds", tp.diag.rank_bound_holds},
                           {"sandwich_holds", tp.diag.sandwich_holds}});
    }
    // typical-mass trend for the reference qubit
    bmac::Matrix rho = bmac::Matrix::Zero(2, 2);
    rho(0, 0) = 0.75;
    rho(1, 1) = 0.25;
    json masses = json::array();
    double prev = -1.0;
    bool monotone = true;
    for (int n : {4, 6, 8}) {
        const double mass = typical_projector(rho, n, 0.35).diag.mass;
        masses.push_back({{"n", n}, {"mass", mass}});
        monotone = monotone && mass > prev;
        prev = mass;
    }
    if (!monotone) ++violations;
    records.push_back({{"property", "mass_trend"},
                       {"delta", 0.35},
                       {"masses", masses},
                       {"monotone", monotone}});
    return records;
}

json verify_oracle(std::uint64_t samples, std::uint64_t seed,
                   std::uint64_t& violations) {
    json records = json::array();
    const bmac::fock::TruncationPolicy policy{60, 1e-10};

    // coherent overlaps: amplitude algebra vs truncated Fock vectors
    {
        bmac::Rng rng(bmac::derive_seed(seed, {21}));
        double worst = 0.0;
        const std::uint64_t count = std::min<std::uint64_t>(samples, 500);
        for (std::uint64_t s = 0; s < count; ++s) {
            const bmac::cplx x = rng.uniform_disk(2.0);
            const bmac::cplx y = rng.uniform_disk(2.0);
            const bmac::cplx via_fock =
                (bmac::fock::coherent_fock(x, policy).adjoint() *
                 bmac::fock::coherent_fock(y, policy))
                    .value();
            worst = std::max(worst,
                             std::abs(via_fock - bmac::coherent::overlap({x}, {y})));
        }
        const bool ok = worst < 1e-10;
        if (!ok) ++violations;
        records.push_back({{"check", "overlap_fock_vs_amplitude"},
                           {"samples", count},
                           {"worst_abs_dev", worst},
                           {"tolerance", 1e-10},
                           {"pass", ok}});
    }

    // decoder chains: span representation vs dense Fock simulation
    {
        bmac::Rng rng(bmac::derive_seed(seed, {22}));
        double worst = 0.0;
        const std::uint64_t count = std::min<std::uint64_t>(samples, 100);
        for (std::uint64_t s = 0; s < count; ++s) {
            const int n = 1 + static_cast<int>(rng.below(2));
            const int l_count = 1 + static_cast<int>(rng.below(2));
            const int m_count = 1 + static_cast<int>(rng.below(2));
            const double eta = rng.uniform();
            bmac::coherent::CodebookPair cb;
            cb.n = n;
            cb.sender_a.resize(l_count, bmac::coherent::Codeword(n));
            cb.sender_b.resize(m_count, bmac::coherent::Codeword(n));
            for (auto& cw : cb.sender_a)
                for (auto& amp : cw) amp = rng.uniform_disk(std::sqrt(2.0));
            for (auto& cw : cb.sender_b)
                for (auto& amp : cw) amp = rng.uniform_disk(std::sqrt(2.0));
            const bmac::gram::Pair true_pair{
                1 + static_cast<int>(rng.below(l_count)),
                1 + static_cast<int>(rng.below(m_count))};
            const double via_gram =
                bmac::gram::success_probability_exact(cb, eta, true_pair);

            auto output = [&](int l, int m) {
                std::vector<bmac::cplx> gam(n);
                for (int i = 0; i < n; ++i)
                    gam[i] = bmac::coherent::mix_output(
                        eta, cb.sender_a[l][i], cb.sender_b[m][i]);
                return gam;
            };
            bmac::fock::FockVector psi = bmac::fock::product_coherent_state(
                output(true_pair.l - 1, true_pair.m - 1), policy);
            double via_fock = 0.0;
            for (const auto& p : bmac::gram::scan_order(l_count, m_count).pairs) {
                if (psi.squaredNorm() < 1e-28) break;
                const auto r = bmac::fock::three_step_test(
                    psi, output(p.l - 1, p.m - 1), policy);
                if (p == true_pair) {
                    via_fock = r.post_yes.squaredNorm();
                    break;
                }
                psi = r.post_no;
            }
            worst = std::max(worst, std::abs(via_gram - via_fock));
        }
        const bool ok = worst < 1e-6;
        if (!ok) ++violations;
        records.push_back({{"check", "gram_vs_fock_chain"},
                           {"samples", count},
                           {"worst_abs_dev", worst},
                           {"tolerance", 1e-6},
                           {"pass", ok}});
    }

    // thermal entropy vs the closed form, and the displaced min-entropy
    {
        double worst_ent = 0.0;
        for (double n : {0.5, 1.0, 2.0, 3.5, 5.0}) {
            const auto rho =
                bmac::fock::thermal_state(n, bmac::fock::TruncationPolicy{120, 1e-9});
            const double h =
                bmac::fock::spectral_functionals(rho, rho).von_neumann_a;
            worst_ent = std::max(worst_ent,
                                 std::abs(h - bmac::rates::g_function(n)));
        }
        const bool ent_ok = worst_ent < 1e-4;
        if (!ent_ok) ++violations;
        records.push_back({{"check", "thermal_entropy_vs_g"},
                           {"worst_abs_dev", worst_ent},
                           {"tolerance", 1e-4},
                           {"pass", ent_ok}});

        bmac::Rng rng(bmac::derive_seed(seed, {23}));
        double worst_min = 0.0;
        const auto rho = bmac::fock::thermal_state(1.0, policy);
        for (int t = 0; t < 5; ++t) {
            const bmac::Matrix u = bmac::fock::displacement_matrix(
                rng.uniform_disk(2.0), policy);
            worst_min = std::max(
                worst_min,
                std::abs(bmac::fock::min_entropy(u * rho * u.adjoint()) - 1.0));
        }
        const bool min_ok = worst_min < 1e-5;
        if (!min_ok) ++violations;
        records.push_back({{"check", "displaced_thermal_min_entropy"},
                           {"worst_abs_dev", worst_min},
                           {"tolerance", 1e-5},
                           {"pass", min_ok}});
    }
    return records;
}

int run_verify(const VerifyArgs& a) {
    std::uint64_t violations = 0;
    json suites = json::array();
    const bool all = a.suite == "all";
    if (all || a.suite == "lemmas")
        suites.push_back({{"suite", "lemmas"},
                          {"reports",
                           verify_lemmas(a.samples, a.common.seed, violations)}});
    if (all || a.suite == "typicality")
        suites.push_back(
            {{"suite", "typicality"}, {"records", verify_typicality(violations)}});
    if (all || a.suite == "oracle")
        suites.push_back(
            {{"suite", "oracle"},
             {"records", verify_oracle(a.samples, a.common.seed, violations)}});
    if (suites.empty())
        throw bmac::usage_error("verify: unknown suite " + a.suite);

    json out{{"suites", suites},
             {"violations", violations},
             {"seed", a.common.seed},
             {"samples", a.samples}};
    if (a.common.format == "csv") {
        std::ostringstream os;
        bmac::CsvWriter csv(os);
        csv.row({"suite", "violations"});
        for (const auto& s : suites) {
            std::uint64_t suite_viol = 0;
            if (s.contains("reports"))
                for (const auto& r : s.at("reports"))
                    suite_viol += r.at("violations").get<std::uint64_t>();
            csv.row({s.at("suite").get<std::string>(),
                     std::to_string(suite_viol)});
        }
        emit(a.common.out, os.str());
    } else {
        emit(a.common.out, json_payload(out));
    }
    return violations == 0 ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rate regions and sequential decoding for the "
                 "pure-interference bosonic MAC"};
    app.require_subcommand(1);

    RegionArgs region_args;
    CLI::App* region = app.add_subcommand(
        "region", "Emit boundary polylines of the achievable rate regions");
    region->add_option("--eta", region_args.eta, "Transmissivity in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    region->add_option("--nsa", region_args.nsa, "Sender 1 mean photon budget")
        ->check(CLI::NonNegativeNumber);
    region->add_option("--nsb", region_args.nsb, "Sender 2 mean photon budget")
        ->check(CLI::NonNegativeNumber);
    add_common(region, region_args.common);

    MapArgs map_args;
    CLI::App* map = app.add_subcommand(
        "map", "Tabulate where sequential decoding fills the full region");
    map->add_option("--eta", map_args.etas,
                    "Transmissivity values (default 0.5 and 0.8)")
        ->check(CLI::Range(0.0, 1.0));
    map->add_option("--min", map_args.min, "Grid lower bound");
    map->add_option("--max", map_args.max, "Grid upper bound");
    map->add_option("--steps", map_args.steps, "Grid points per axis");
    add_common(map, map_args.common);

    SimulateArgs sim_args;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Monte Carlo decoding-error simulation");
    simulate->add_option("--mode", sim_args.mode, "bosonic or discrete")
        ->check(CLI::IsMember({"bosonic", "discrete"}));
    simulate->add_option("--eta", sim_args.eta, "Transmissivity (bosonic)")
        ->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--nsa", sim_args.nsa, "Sender 1 budget (bosonic)")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--nsb", sim_args.nsb, "Sender 2 budget (bosonic)")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--rates", sim_args.rates, "Rate pair R1 R2 in bits")
        ->expected(2)
        ->check(CLI::NonNegativeNumber);
    simulate
        ->add_option("--n", sim_args.n_values,
                     "Block lengths, comma separated (e.g. 4,8,12)")
        ->delimiter(',');
    simulate->add_option("--codebooks", sim_args.codebooks,
                         "Random codebook instances");
    simulate->add_option("--trials", sim_args.trials,
                         "Sampled message pairs per codebook (0: all pairs)");
    simulate->add_option("--cap", sim_args.cap, "Guard on K = L*M (bosonic)");
    simulate->add_option("--mac", sim_args.mac_path,
                         "MAC description JSON (discrete)");
    add_common(simulate, sim_args.common);

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand(
        "verify", "Run the lemma/typicality/oracle property suites");
    verify->add_option("--suite", verify_args.suite,
                       "lemmas, typicality, oracle, or all")
        ->check(CLI::IsMember({"lemmas", "typicality", "oracle", "all"}));
    verify->add_option("--samples", verify_args.samples,
                       "Random instances per sweep");
    add_common(verify, verify_args.common);

    try {
        app.parse(argc, argv);
        for (auto& [cmd, common] :
             std::vector<std::pair<CLI::App*, CommonOpts*>>{
                 {region, &region_args.common},
                 {map, &map_args.common},
                 {simulate, &sim_args.common},
                 {verify, &verify_args.common}}) {
            if (cmd->parsed() && !common->config.empty())
                apply_config(cmd, common->config);
        }
        if (region->parsed()) return run_region(region_args);
        if (map->parsed()) return run_map(map_args);
        if (simulate->parsed()) return run_simulate(sim_args);
        if (verify->parsed()) return run_verify(verify_args);
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const bmac::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const bmac::resource_error& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPropertyFailure;
    }
}
