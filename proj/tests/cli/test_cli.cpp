#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = slowent::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream f(p);
    std::string line;
    while (std::getline(f, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("slowent_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("sturmian complexity is n + 1") {
    const auto dir = scratch("sturmian");
    const Run r = cli({"sturmian", "--theta", "[0;(1)]", "--nmax", "2000", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(dir / "complexity.csv");
    REQUIRE(rows.size() == 1 + 2000 + 200);
    CHECK(rows[0] == std::vector<std::string>{"n", "p_n", "method"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stoll(rows[i][1]) == std::stoll(rows[i][0]) + 1);
    CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("gap rows are exact and oracle checked") {
    const auto dir = scratch("gaps");
    const Run r = cli({"gaps", "--theta", "[0;(1)]", "--n", "100", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(dir / "gaps.csv");
    REQUIRE(rows.size() == 101);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][4].find('/') != std::string::npos);
        const long n = std::stol(rows[i][0]);
        CHECK(std::stol(rows[i][5]) + std::stol(rows[i][7]) + std::stol(rows[i][9]) == n + 1);
    }
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["results"]["oracle_checked"] == 100);
}

TEST_CASE("manifest replay reproduces the data byte for byte") {
    const auto first = scratch("replay_a"), second = scratch("replay_b");
    REQUIRE(cli({"iet", "--alpha", "[0;(1)]", "--xi", "2/5", "--nmax", "100", "--out", first.string()}).code == 0);
    REQUIRE(cli({"replay", "--manifest", (first / "manifest.json").string(), "--out", second.string()}).code == 0);
    CHECK(slurp(first / "refinement.csv") == slurp(second / "refinement.csv"));
    CHECK(slurp(first / "manifest.json") == slurp(second / "manifest.json"));

    const auto third = scratch("replay_c"), fourth = scratch("replay_d");
    REQUIRE(cli({"skew", "--samples", "300", "--nmax", "600", "--seed", "5", "--out", third.string()}).code == 0);
    REQUIRE(cli({"replay", "--manifest", (third / "manifest.json").string(), "--out", fourth.string()}).code == 0);
    CHECK(slurp(third / "counts.csv") == slurp(fourth / "counts.csv"));
}

TEST_CASE("entropy from a spec file reports an exponent") {
    const auto dir = scratch("entropy");
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "system.json");
        f << R"({"system": "iet", "alpha": "[0;(1)]", "xi": "1/2"})";
    }
    const Run r = cli({"entropy", "--spec", (dir / "system.json").string(), "--epsilon", "0.05", "--samples", "2000",
                       "--seed", "7", "--nmax", "2000", "--out", (dir / "run").string()});
    REQUIRE(r.code == 0);
    const auto estimate = nlohmann::json::parse(slurp(dir / "run" / "estimate.json"));
    REQUIRE(estimate.contains("exponent"));
    CHECK(estimate["exponent"].get<double>() > 0.5);
    CHECK(estimate["epsilon"] == "1/20");
    // the system description travels inside the manifest
    const auto manifest = nlohmann::json::parse(slurp(dir / "run" / "manifest.json"));
    CHECK(manifest["parameters"]["system_spec"]["xi"] == "1/2");
}

TEST_CASE("product of two rotations") {
    const auto dir = scratch("product");
    const Run r = cli({"product", "--theta", "[0;(1)]", "--theta", "[0;(2)]", "--nmax", "40", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(dir / "product_complexity.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] == rows[i][2]);
}

TEST_CASE("exit codes") {
    const auto dir = scratch("errors");
    CHECK(cli({}).code == 2);
    CHECK(cli({"nonsense"}).code == 2);
    CHECK(cli({"gaps", "--n", "10"}).code == 2);  // missing --theta

    Run r = cli({"gaps", "--theta", "[0;(1", "--n", "10", "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("--theta") != std::string::npos);

    r = cli({"sturmian", "--theta", "[0;(1)]", "--nmax", "ten", "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("--nmax") != std::string::npos);

    r = cli({"gaps", "--theta", "[0;(1)]", "--n", "50", "--depth", "3", "--out", dir.string()});
    CHECK(r.code == 3);
    CHECK(r.err.find("--theta") != std::string::npos);

    r = cli({"skew", "--samples", "20", "--out", dir.string()});
    CHECK(r.code == 3);
    CHECK(r.err.find("--samples") != std::string::npos);

    r = cli({"suspend", "--d1", "0", "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("--d1") != std::string::npos);

    CHECK(cli({"replay", "--manifest", (dir / "missing.json").string()}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}
