#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bmac/io.hpp"
#include "bmac/rates.hpp"

namespace {

std::string cli_path() {
    const char* p = std::getenv("BMACLAB_BIN");
    REQUIRE(p != nullptr);
    return p;
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("region command output") {
    const auto r = run("region --eta 0.5 --nsa 1 --nsb 1");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.output);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "region,vertex_index,r1_bits,r2_bits");
    int rows = 0;
    std::set<std::string> names;
    while (std::getline(lines, line)) {
        ++rows;
        names.insert(line.substr(0, line.find(',')));
        CHECK(line.find(' ') == std::string::npos);
    }
    CHECK(names == std::set<std::string>{"yen_shapiro", "min_entropy_1",
                                         "min_entropy_2", "hull",
                                         "baseline_heterodyne",
                                         "baseline_homodyne"});
    CHECK(rows >= 6 * 3);
    SECTION("json format carries the same vertex data") {
        const auto j =
            nlohmann::json::parse(run("region --eta 0.5 --nsa 1 --nsb 1 "
                                      "--format json")
                                      .output);
        REQUIRE(j.at("regions").size() == 6);
        const auto ys = bmac::rates::region_geometry(
            bmac::rates::yen_shapiro_region({0.5, 1.0, 1.0}));
        const auto& verts = j.at("regions").at(0).at("vertices");
        REQUIRE(verts.size() == ys.vertices.size());
        for (std::size_t i = 0; i < ys.vertices.size(); ++i) {
            CHECK(verts.at(i).at(0).get<double>() ==
                  Catch::Approx(ys.vertices[i].r1).margin(1e-12));
            CHECK(verts.at(i).at(1).get<double>() ==
                  Catch::Approx(ys.vertices[i].r2).margin(1e-12));
        }
    }
    SECTION("degenerate channel collapses every region to the origin") {
        const auto out = run("region --eta 0.5 --nsa 0 --nsb 0");
        std::istringstream ls(out.output);
        std::string row;
        std::getline(ls, row);   // header
        int count = 0;
        while (std::getline(ls, row)) {
            ++count;
            CHECK(row.substr(row.find(',') + 1) == "0,0,0");
        }
        CHECK(count == 6);
    }
}

TEST_CASE("identical config and seed give byte-identical files") {
    const std::string base = std::string(std::tmpnam(nullptr));
    SECTION("region") {
        REQUIRE(run("region --eta 0.4 --nsa 2 --nsb 3 --out " + base + "_r1.csv")
                    .exit_code == 0);
        REQUIRE(run("region --eta 0.4 --nsa 2 --nsb 3 --out " + base + "_r2.csv")
                    .exit_code == 0);
        const std::string body = slurp(base + "_r1.csv");
        CHECK(body == slurp(base + "_r2.csv"));
        // LF endings only
        CHECK(body.find('\r') == std::string::npos);
        CHECK(body.back() == '\n');
    }
    SECTION("simulate, independent of thread count") {
        const std::string flags =
            "simulate --mode bosonic --eta 0.5 --nsa 1 --nsb 1 --rates 0.4 0.4 "
            "--n 2 --codebooks 10 --trials 5 --seed 99 ";
        REQUIRE(run(flags + "--threads 1 --out " + base + "_s1.json").exit_code == 0);
        REQUIRE(run(flags + "--threads 2 --out " + base + "_s2.json").exit_code == 0);
        CHECK(slurp(base + "_s1.json") == slurp(base + "_s2.json"));
    }
}

TEST_CASE("simulate command") {
    SECTION("zero rates decode perfectly") {
        const auto j = nlohmann::json::parse(
            run("simulate --mode bosonic --rates 0 0").output);
        CHECK(j.at("error_mean").get<double>() == 0.0);
        CHECK(j.at("K").get<int>() == 1);
        CHECK(j.at("sen_bound_violations").get<int>() == 0);
    }
    SECTION("report schema fields present") {
        const auto j = nlohmann::json::parse(
            run("simulate --mode bosonic --eta 0.5 --nsa 1 --nsb 1 "
                "--rates 0.3 0.3 --n 2 --codebooks 5 --trials 5 --seed 3")
                .output);
        for (const char* key : {"params", "rates", "n", "K", "error_mean",
                                "error_stderr", "sen_bound_violations"})
            CHECK(j.contains(key));
    }
    SECTION("discrete mode flags the error trend") {
        const std::string mac_file = std::string(std::tmpnam(nullptr)) + ".json";
        {
            nlohmann::json mac;
            bmac::dmac::to_json(mac, bmac::dmac::xor_mac());
            std::ofstream f(mac_file);
            f << mac;
        }
        const auto r = run("simulate --mode discrete --mac " + mac_file +
                           " --rates 0.3 0.3 --n 4,8 --codebooks 80 "
                           "--trials 4 --seed 12");
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.output);
        REQUIRE(j.at("reports").size() == 2);
        CHECK(j.at("trend").at("flag").get<std::string>() == "PASS");
        std::remove(mac_file.c_str());
    }
}

TEST_CASE("exit codes") {
    CHECK(run("map --steps 1").exit_code == 2);                     // usage
    CHECK(run("region --eta 2.0").exit_code == 2);                  // range
    CHECK(run("simulate --mode bosonic --rates 4 4 --n 4").exit_code == 3);
    CHECK(run("verify --suite lemmas --samples 50").exit_code == 0);
    CHECK(run("nonsense").exit_code == 2);
}

TEST_CASE("hull polyline matches Yen-Shapiro when the conditions hold") {
    const auto j = nlohmann::json::parse(
        run("region --eta 0.5 --nsa 10 --nsb 8 --format json").output);
    nlohmann::json ys, hull;
    for (const auto& r : j.at("regions")) {
        if (r.at("name") == "yen_shapiro") ys = r.at("vertices");
        if (r.at("name") == "hull") hull = r.at("vertices");
    }
    REQUIRE(ys.size() == hull.size());
    for (std::size_t i = 0; i < ys.size(); ++i)
        for (int c : {0, 1})
            CHECK(hull.at(i).at(c).get<double>() ==
                  Catch::Approx(ys.at(i).at(c).get<double>()).margin(1e-9));
}

TEST_CASE("map command endpoints") {
    const auto r = run("map --eta 0.5 --max 20 --steps 50");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.output);
    std::string line, last;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "nsa,nsb,equal");
    REQUIRE(std::getline(lines, line));
    CHECK(line == "0,0,1");
    while (std::getline(lines, line))
        if (!line.empty()) last = line;
    CHECK(last == "20,20,1");
}

TEST_CASE("config file mirrors flags with explicit flags winning") {
    const std::string cfg = std::string(std::tmpnam(nullptr)) + ".json";
    {
        std::ofstream f(cfg);
        f << R"({"eta": 0.6, "nsa": 2.0, "nsb": 2.0})";
    }
    const auto with_config = run("region --config " + cfg);
    const auto direct = run("region --eta 0.6 --nsa 2 --nsb 2");
    CHECK(with_config.output == direct.output);
    const auto overridden = run("region --config " + cfg + " --nsa 3");
    const auto direct2 = run("region --eta 0.6 --nsa 3 --nsb 2");
    CHECK(overridden.output == direct2.output);
    std::remove(cfg.c_str());
}
