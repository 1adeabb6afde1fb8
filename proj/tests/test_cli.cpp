#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// End-to-end checks of the command-line driver: these spawn the built binary
// (path in SUBRISK_CLI) against the bundled configs (SUBRISK_CONFIGS).

#include "subrisk/csv.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string cli_path() {
    const char* p = std::getenv("SUBRISK_CLI");
    REQUIRE_MESSAGE(p != nullptr, "SUBRISK_CLI must point at the built binary");
    return p;
}

std::string configs_dir() {
    const char* p = std::getenv("SUBRISK_CONFIGS");
    REQUIRE_MESSAGE(p != nullptr, "SUBRISK_CONFIGS must point at the bundled configs");
    return p;
}

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    const fs::path tmp = fs::temp_directory_path();
    const fs::path out_file = tmp / "subrisk_test_stdout.txt";
    const fs::path err_file = tmp / "subrisk_test_stderr.txt";
    const std::string cmd =
        cli_path() + " " + args + " >" + out_file.string() + " 2>" + err_file.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::string slurp_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

subrisk::csv::Table read_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return subrisk::csv::read(in);
}

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("inspect reports the derived quantities of the figure-2 model") {
    const auto r = run_cli("inspect " + configs_dir() + "/figure2.json");
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep["effective_rate"].get<double>() == doctest::Approx(3.0 / 11.0).epsilon(1e-14));
    CHECK(rep["mixture_weights"]["single"].get<double>() ==
          doctest::Approx(0.7333333333).epsilon(1e-9));
    CHECK(rep["tail_classification"]["class"] == "light");
    CHECK(rep["time_normalization"]["pass"] == true);
    CHECK(rep["net_profit"]["holds"] == true);
    CHECK(rep["regular_variation"].is_null());
}

TEST_CASE("inspect on the identity clock: effective rate lambda, single weight 1") {
    const auto r = run_cli("inspect " + configs_dir() + "/base_exp.json");
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep["effective_rate"].get<double>() == 1.0);
    CHECK(rep["mixture_weights"]["single"].get<double>() == 1.0);
    CHECK(rep["mixture_weights"]["cluster"].get<double>() == 0.0);
}

TEST_CASE("inspect classifies the closing example as heavy via the clock") {
    const auto r = run_cli("inspect " + configs_dir() + "/closing_example.json");
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep["tail_classification"]["class"] == "heavy");
    CHECK(rep["tail_classification"]["reason"] == "subordinator");
    CHECK(rep["regular_variation"]["tail_index"].get<double>() == doctest::Approx(-2.0));
    CHECK(rep["regular_variation"]["sv_constant"].get<double>() ==
          doctest::Approx(0.0025).epsilon(1e-9));
}

TEST_CASE("adjustment reproduces the figure-3 table and roots") {
    const fs::path out = temp_file("fig3_curves.csv");
    fs::remove(out);
    const auto r = run_cli("adjustment " + configs_dir() + "/figure3.json -o " + out.string());
    REQUIRE(r.exit_code == 0);

    const json roots = json::parse(r.out);
    const double base_root = roots["base"]["coefficient"].get<double>();
    CHECK(base_root == doctest::Approx(1.2).epsilon(1e-10));
    bool saw_rate_050 = false;
    for (const auto& row : roots["subordinated"]) {
        const double coeff = row["coefficient"].get<double>();
        CHECK(coeff <= base_root);  // R_sub <= R in every emitted table
        if (row["label"] == "rate_050") {
            saw_rate_050 = true;
            CHECK(coeff == doctest::Approx(0.24).epsilon(1e-10));
        }
    }
    CHECK(saw_rate_050);

    const auto table = read_csv(out);
    REQUIRE(table.header.size() == 5);  // r, base, three subordinators
    CHECK(table.header[0] == "r");
    CHECK(table.rows.size() == 141);
    CHECK(table.number(0, "r") == 0.0);
    CHECK(table.number(0, "theta_base") == 0.0);
    CHECK(table.number(140, "r") == doctest::Approx(1.4));
}

TEST_CASE("zhist emits paired samples whose quantiles are ordered") {
    const fs::path out = temp_file("zhist.csv");
    fs::remove(out);
    const auto r = run_cli("zhist " + configs_dir() + "/figure2.json -o " + out.string());
    REQUIRE(r.exit_code == 0);

    const json summary = json::parse(r.out);
    for (const char* q : {"q50", "q90", "q99"}) {
        const double zq = summary["z_quantiles"][q].get<double>();
        const double xq = summary["x_quantiles"][q].get<double>();
        CHECK(zq >= xq * 0.98);  // dominance with a small sampling slack
    }

    const auto table = read_csv(out);
    REQUIRE(table.header == std::vector<std::string>{"z", "x"});
    CHECK(table.rows.size() == 200000);

    // the Z sample mean sits at lambda E[X] / psi = 11/3
    double mean = 0.0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) mean += table.number(i, "z");
    mean /= static_cast<double>(table.rows.size());
    CHECK(std::fabs(mean - 11.0 / 3.0) < 0.15);
}

TEST_CASE("zhist with n = 0 writes a valid header-only file") {
    const fs::path cfg = temp_file("zhist0.json");
    {
        json j = json::parse(slurp_file(fs::path(configs_dir()) / "figure2.json"));
        j["zhist"]["n"] = 0;
        std::ofstream(cfg) << j.dump();
    }
    const fs::path out = temp_file("zhist0.csv");
    fs::remove(out);
    const auto r = run_cli("zhist " + cfg.string() + " -o " + out.string());
    REQUIRE(r.exit_code == 0);
    const auto table = read_csv(out);
    CHECK(table.header == std::vector<std::string>{"z", "x"});
    CHECK(table.rows.empty());
}

TEST_CASE("ruin emits one row per method with per-method status") {
    const fs::path cfg = temp_file("ruin_small.json");
    {
        json j = json::parse(slurp_file(fs::path(configs_dir()) / "base_exp.json"));
        j["ruin"]["u_values"] = {0.0, 1.0};
        j["ruin"]["horizon"] = 100.0;
        j["ruin"]["n_paths"] = 20000;
        j["ruin"]["n_geom"] = 100000;
        std::ofstream(cfg) << j.dump();
    }
    const fs::path out = temp_file("ruin_small.csv");
    fs::remove(out);
    const auto r = run_cli("ruin " + cfg.string() + " -o " + out.string());
    REQUIRE(r.exit_code == 0);
    const auto table = read_csv(out);
    REQUIRE(table.rows.size() == 8);  // 2 capital levels x 4 methods

    int ok = 0, skipped = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& status = table.cell(i, "status");
        if (status == "ok") ++ok;
        if (status == "skipped") {
            ++skipped;
            CHECK(table.cell(i, "method") == "karamata_asymptote");
        }
    }
    CHECK(ok == 6);
    CHECK(skipped == 2);

    // mc, pk, and the CL asymptote agree at u = 1 (exact for these claims)
    double mc = 0, pk = 0, cl = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.number(i, "u") != 1.0) continue;
        if (table.cell(i, "method") == "mc") mc = table.number(i, "estimate");
        if (table.cell(i, "method") == "pk") pk = table.number(i, "estimate");
        if (table.cell(i, "method") == "cl_asymptote") cl = table.number(i, "estimate");
    }
    CHECK(std::fabs(cl - 0.5 * std::exp(-0.5)) < 1e-9);
    CHECK(std::fabs(mc - cl) < 0.015);
    CHECK(std::fabs(pk - cl) < 0.01);
}

TEST_CASE("ruin on the heavy closing example: CL skipped, Karamata present") {
    const fs::path cfg = temp_file("ruin_heavy.json");
    {
        json j = json::parse(slurp_file(fs::path(configs_dir()) / "closing_example.json"));
        j["ruin"]["u_values"] = {10.0};
        j["ruin"]["horizon"] = 50.0;
        j["ruin"]["n_paths"] = 2000;
        j["ruin"]["n_geom"] = 2000;
        std::ofstream(cfg) << j.dump();
    }
    const fs::path out = temp_file("ruin_heavy.csv");
    fs::remove(out);
    const auto r = run_cli("ruin " + cfg.string() + " -o " + out.string());
    REQUIRE(r.exit_code == 0);
    const auto table = read_csv(out);

    bool saw_cl = false, saw_karamata = false, saw_pk_fallback = false;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& method = table.cell(i, "method");
        if (method == "cl_asymptote") {
            saw_cl = true;
            CHECK(table.cell(i, "status") == "skipped");
            CHECK(table.cell(i, "note") == "HeavyTail");
        }
        if (method == "karamata_asymptote") {
            saw_karamata = true;
            CHECK(table.cell(i, "status") == "ok");
            CHECK(table.number(i, "estimate") == doctest::Approx(2.5e-4).epsilon(1e-9));
        }
        if (method == "pk") {
            saw_pk_fallback = true;
            CHECK(table.cell(i, "status") == "ok");
            CHECK(table.cell(i, "note").find("IntegratedTailUnavailable") != std::string::npos);
        }
    }
    CHECK(saw_cl);
    CHECK(saw_karamata);
    CHECK(saw_pk_fallback);
}

TEST_CASE("invalid configs exit with 2, name the field, and leave no output") {
    const fs::path cfg = temp_file("bad_rate.json");
    {
        json j = json::parse(slurp_file(fs::path(configs_dir()) / "figure2.json"));
        j["model"]["base"]["claim_law"]["rate"] = -1.0;
        std::ofstream(cfg) << j.dump();
    }
    const fs::path out = temp_file("bad_rate.csv");
    fs::remove(out);
    const auto r = run_cli("zhist " + cfg.string() + " -o " + out.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("model.base.claim_law.rate") != std::string::npos);
    CHECK_FALSE(fs::exists(out));

    const auto missing = run_cli("inspect /nonexistent.json");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("a stochastic command without a seed is a config error") {
    const fs::path cfg = temp_file("no_seed.json");
    {
        json j = json::parse(slurp_file(fs::path(configs_dir()) / "figure2.json"));
        j.erase("seed");
        std::ofstream(cfg) << j.dump();
    }
    const auto r = run_cli("zhist " + cfg.string() + " -o " + temp_file("no_seed.csv").string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("seed") != std::string::npos);
    // the seed flag unblocks it
    const auto r2 =
        run_cli("zhist " + cfg.string() + " --seed 5 -o " + temp_file("no_seed.csv").string());
    CHECK(r2.exit_code == 0);
}

TEST_CASE("math preconditions exit with 3") {
    const fs::path cfg = temp_file("heavy_adjustment.json");
    {
        json j = json::parse(slurp_file(fs::path(configs_dir()) / "figure3.json"));
        j["model"]["base"]["claim_law"] = {{"kind", "pareto"}, {"scale", 1.0}, {"shape", 2.0}};
        std::ofstream(cfg) << j.dump();
    }
    const auto r = run_cli("adjustment " + cfg.string() + " -o " +
                           temp_file("heavy_adjustment.csv").string());
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("HeavyTail") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
    const fs::path cfg = temp_file("repro.json");
    {
        json j = json::parse(slurp_file(fs::path(configs_dir()) / "base_exp.json"));
        j["ruin"]["u_values"] = {1.0};
        j["ruin"]["horizon"] = 50.0;
        j["ruin"]["n_paths"] = 5000;
        j["ruin"]["n_geom"] = 5000;
        std::ofstream(cfg) << j.dump();
    }
    const fs::path out1 = temp_file("repro1.csv");
    const fs::path out2 = temp_file("repro2.csv");
    REQUIRE(run_cli("ruin " + cfg.string() + " -o " + out1.string()).exit_code == 0);
    REQUIRE(run_cli("ruin " + cfg.string() + " -o " + out2.string()).exit_code == 0);
    CHECK(slurp_file(out1) == slurp_file(out2));

    // a different seed changes the stochastic rows
    const fs::path out3 = temp_file("repro3.csv");
    REQUIRE(run_cli("ruin " + cfg.string() + " --seed 777 -o " + out3.string()).exit_code == 0);
    CHECK(slurp_file(out1) != slurp_file(out3));
}

TEST_CASE("emitted numbers round-trip bit-exactly through the csv reader") {
    const fs::path cfg = temp_file("sweep_small.json");
    {
        json j = json::parse(slurp_file(fs::path(configs_dir()) / "base_exp.json"));
        j["sweep"]["u_grid"] = {1.0, 2.0};
        j["sweep"]["horizon"] = 30.0;
        j["sweep"]["n_paths"] = 2000;
        std::ofstream(cfg) << j.dump();
    }
    const fs::path out = temp_file("sweep_small.csv");
    fs::remove(out);
    REQUIRE(run_cli("sweep " + cfg.string() + " -o " + out.string()).exit_code == 0);
    const auto table = read_csv(out);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].size() == table.header.size());
    // re-formatting each numeric cell reproduces the file text exactly
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (const char* col : {"u", "estimate", "std_error", "horizon"}) {
            const std::string& text = table.cell(i, col);
            CHECK(subrisk::csv::format_double(subrisk::csv::parse_double(text)) == text);
        }
    }
    CHECK(table.number(1, "estimate") <= table.number(0, "estimate"));
}

TEST_CASE("trajectory export parses and only falls at claim epochs") {
    const fs::path out = temp_file("traj.csv");
    fs::remove(out);
    const auto r = run_cli("trajectory " + configs_dir() + "/base_exp.json -o " + out.string());
    REQUIRE(r.exit_code == 0);
    const auto table = read_csv(out);
    REQUIRE(table.header == std::vector<std::string>{"t", "surplus"});
    REQUIRE(table.rows.size() >= 2);
    CHECK(table.number(0, "t") == 0.0);
    CHECK(table.number(0, "surplus") == 1.0);
    for (std::size_t i = 2; i < table.rows.size(); ++i) {
        const double t_prev = table.number(i - 1, "t");
        const double t_cur = table.number(i, "t");
        const double s_prev = table.number(i - 1, "surplus");
        const double s_cur = table.number(i, "surplus");
        REQUIRE(t_cur >= t_prev);
        if (s_cur < s_prev) REQUIRE(t_cur == t_prev);  // drops happen at an instant
    }
}
