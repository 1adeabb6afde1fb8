#include "subrisk/config.hpp"
#include "subrisk/csv.hpp"
#include "subrisk/errors.hpp"
#include "subrisk/ruin.hpp"
#include "subrisk/simulation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using subrisk::config::json;

struct CommonArgs {
    std::string config_path;
    std::string out_path;  // empty: CSV/JSON to stdout
    std::optional<std::uint64_t> seed_override;
    bool verbose = false;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw subrisk::ConfigError("config: cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw subrisk::ConfigError("config: " + std::string(e.what()));
    }
}

const json& command_section(const json& cfg, const char* name) {
    static const json empty = json::object();
    if (!cfg.contains(name)) return empty;
    if (!cfg.at(name).is_object()) {
        throw subrisk::ConfigError(std::string(name) + ": must be an object");
    }
    return cfg.at(name);
}

std::uint64_t resolve_seed(const json& cfg, const CommonArgs& args) {
    if (args.seed_override) return *args.seed_override;
    if (cfg.contains("seed")) return subrisk::config::require_uint(cfg, "", "seed");
    throw subrisk::ConfigError("seed: required for stochastic commands (config or --seed)");
}

std::string resolve_out(const json& cfg, const CommonArgs& args) {
    if (!args.out_path.empty()) return args.out_path;
    if (cfg.contains("output")) return subrisk::config::require_string(cfg, "", "output");
    return {};
}

// Everything is computed before anything is written, so failed runs leave no
// partial output files behind.
void write_text(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw subrisk::ConfigError("output: cannot open '" + out_path + "'");
    os << content;
}

std::string table_to_string(const subrisk::csv::Table& t) {
    std::ostringstream os;
    subrisk::csv::write(t, os);
    return os.str();
}

std::string sanitize_label(const std::string& label) {
    std::string out = label;
    for (char& c : out) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '_';
    }
    return out;
}

double quantile_of_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(i);
    return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

int cmd_inspect(const json& cfg, const CommonArgs& args) {
    const auto model =
        subrisk::config::parse_model(subrisk::config::require_field(cfg, "", "model"), "model");
    const auto& p = model.process;

    json report;
    report["model"]["base"]["rate"] = p.base().rate;
    report["model"]["base"]["claim_law"] = subrisk::config::claim_law_to_json(p.base().claim_law);
    report["model"]["subordinator"] = subrisk::config::subordinator_to_json(p.subordinator());
    report["effective_rate"] = p.effective_rate();

    json norm;
    try {
        const auto check = p.subordinator().check_time_normalized();
        norm["mean_lambda1"] = p.subordinator().mean_lambda1();
        norm["deviation"] = check.deviation;
        norm["pass"] = check.pass;
    } catch (const subrisk::PreconditionError& e) {
        norm["pass"] = false;
        norm["error"] = e.kind();
    }
    report["time_normalization"] = norm;

    if (p.subordinator().finite_activity() && p.subordinator().is_time_normalized()) {
        const auto w = p.z_mixture_weights();
        report["mixture_weights"]["single"] = w.single;
        report["mixture_weights"]["cluster"] = w.cluster;
    } else {
        report["mixture_weights"] = nullptr;
    }

    const auto cls = p.classify_y_tail();
    report["tail_classification"]["class"] =
        cls.tail == subrisk::SubordinatedCPP::TailClass::light ? "light" : "heavy";
    report["tail_classification"]["reason"] = cls.reason;

    if (const auto rv = subrisk::rv_spec_of_subordinator(p.subordinator())) {
        report["regular_variation"]["tail_index"] = -rv->index;
        report["regular_variation"]["sv_constant"] = rv->sv_constant;
    } else {
        report["regular_variation"] = nullptr;
    }

    if (model.capital && model.premium) {
        const subrisk::RiskModel m(*model.capital, *model.premium, p);
        report["net_profit"]["premium_rate"] = m.premium_rate;
        report["net_profit"]["expected_claims_per_unit_time"] = m.expected_claims_per_unit_time();
        report["net_profit"]["holds"] = m.net_profit_condition();
    }

    if (args.verbose) {
        std::cerr << "claims: " << p.base().claim_law.describe()
                  << ", effective rate: " << p.effective_rate() << "\n";
    }
    write_text(resolve_out(cfg, args), report.dump(2) + "\n");
    return 0;
}

int cmd_adjustment(const json& cfg, const CommonArgs& args) {
    const auto model =
        subrisk::config::parse_model(subrisk::config::require_field(cfg, "", "model"), "model");
    const json& section = command_section(cfg, "adjustment");

    double r_min = 0.0, r_max = 0.0;
    std::uint64_t r_points = 101;
    if (section.contains("r_min")) r_min = subrisk::config::require_number(section, "adjustment", "r_min");
    r_max = subrisk::config::require_positive(section, "adjustment", "r_max");
    if (section.contains("r_points")) {
        r_points = subrisk::config::require_uint(section, "adjustment", "r_points");
        if (r_points < 2) throw subrisk::ConfigError("adjustment.r_points: must be >= 2");
    }
    if (!(r_max > r_min)) throw subrisk::ConfigError("adjustment.r_max: must exceed r_min");

    const double capital = model.capital.value_or(0.0);
    if (!model.premium) throw subrisk::ConfigError("model.premium: required for this command");

    // the adjustment machinery is for the light-tailed regime only
    const subrisk::RiskModel base_model(
        capital, *model.premium,
        subrisk::SubordinatedCPP(model.process.base(), subrisk::Subordinator::pure_drift(1.0)));
    if (base_model.claims.classify_y_tail().tail == subrisk::SubordinatedCPP::TailClass::heavy) {
        throw subrisk::PreconditionError(subrisk::errkind::heavy_tail,
                                         "adjustment analysis requires light-tailed claims");
    }

    struct Entry {
        std::string label;
        subrisk::RiskModel model;
    };
    std::vector<Entry> entries;
    if (section.contains("subordinators")) {
        const json& subs = section.at("subordinators");
        if (!subs.is_array() || subs.empty()) {
            throw subrisk::ConfigError("adjustment.subordinators: must be a nonempty array");
        }
        int i = 0;
        for (const auto& sj : subs) {
            const std::string path = "adjustment.subordinators[" + std::to_string(i) + "]";
            std::string label = sj.contains("label")
                                    ? subrisk::config::require_string(sj, path, "label")
                                    : "sub" + std::to_string(i + 1);
            entries.push_back(Entry{
                sanitize_label(label),
                subrisk::RiskModel(capital, *model.premium,
                                   subrisk::SubordinatedCPP(
                                       model.process.base(),
                                       subrisk::config::parse_subordinator(sj, path)))});
            ++i;
        }
    } else {
        entries.push_back(Entry{"sub1", subrisk::RiskModel(capital, *model.premium, model.process)});
    }

    json roots;
    auto solve_into = [](const subrisk::RiskModel& m, json& out) {
        try {
            const auto res = subrisk::solve_adjustment(m);
            out["coefficient"] = res.coefficient;
            out["bracket"] = {res.bracket_lo, res.bracket_hi};
            out["residual"] = res.residual;
            if (res.asymptotic_prefactor) {
                out["asymptotic_prefactor"] = *res.asymptotic_prefactor;
            } else {
                out["asymptotic_prefactor"] = nullptr;
            }
        } catch (const subrisk::PreconditionError& e) {
            out["error"] = e.kind();
            out["message"] = e.what();
        }
    };
    roots["base"]["label"] = "base";
    solve_into(base_model, roots["base"]);
    roots["subordinated"] = json::array();
    for (const auto& entry : entries) {
        json row;
        row["label"] = entry.label;
        solve_into(entry.model, row);
        roots["subordinated"].push_back(row);
    }

    subrisk::csv::Table table;
    table.header.push_back("r");
    table.header.push_back("theta_base");
    for (const auto& entry : entries) table.header.push_back("theta_" + entry.label);
    for (std::uint64_t i = 0; i < r_points; ++i) {
        const double r = r_min + (r_max - r_min) * static_cast<double>(i) /
                                     static_cast<double>(r_points - 1);
        std::vector<std::string> row;
        row.push_back(subrisk::csv::format_double(r));
        row.push_back(subrisk::csv::format_double(subrisk::adjustment_function(base_model, r)));
        for (const auto& entry : entries) {
            row.push_back(
                subrisk::csv::format_double(subrisk::adjustment_function(entry.model, r)));
        }
        table.rows.push_back(std::move(row));
    }

    const std::string out = resolve_out(cfg, args);
    write_text(out, table_to_string(table));
    if (!out.empty()) {
        std::cout << roots.dump(2) << "\n";
    } else {
        std::cerr << roots.dump(2) << "\n";
    }
    return 0;
}

int cmd_zhist(const json& cfg, const CommonArgs& args) {
    const auto model =
        subrisk::config::parse_model(subrisk::config::require_field(cfg, "", "model"), "model");
    const json& section = command_section(cfg, "zhist");
    const std::uint64_t n = subrisk::config::require_uint(section, "zhist", "n");
    const std::uint64_t seed = resolve_seed(cfg, args);

    subrisk::RandomSource rng(seed);
    subrisk::ZSampleDiagnostics diag;
    std::vector<double> z(n), x(n);
    for (std::uint64_t i = 0; i < n; ++i) z[i] = model.process.sample_z(rng, &diag);
    for (std::uint64_t i = 0; i < n; ++i) x[i] = model.process.base().claim_law.sample(rng);

    subrisk::csv::Table table;
    table.header = {"z", "x"};
    table.rows.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        table.rows.push_back({subrisk::csv::format_double(z[i]), subrisk::csv::format_double(x[i])});
    }

    json summary;
    std::sort(z.begin(), z.end());
    std::sort(x.begin(), x.end());
    for (const double q : {0.5, 0.9, 0.99}) {
        const std::string key = "q" + std::to_string(static_cast<int>(q * 100));
        summary["z_quantiles"][key] = quantile_of_sorted(z, q);
        summary["x_quantiles"][key] = quantile_of_sorted(x, q);
    }
    summary["n"] = n;
    summary["seed"] = seed;
    summary["cluster_acceptance_rate"] = diag.acceptance_rate();

    const std::string out = resolve_out(cfg, args);
    write_text(out, table_to_string(table));
    if (!out.empty()) {
        std::cout << summary.dump(2) << "\n";
    } else {
        std::cerr << summary.dump(2) << "\n";
    }
    return 0;
}

int cmd_ruin(const json& cfg, const CommonArgs& args) {
    const auto model =
        subrisk::config::parse_model(subrisk::config::require_field(cfg, "", "model"), "model");
    const json& section = command_section(cfg, "ruin");
    if (!model.premium) throw subrisk::ConfigError("model.premium: required for this command");

    std::vector<double> u_values;
    if (section.contains("u_values")) {
        for (const auto& v : section.at("u_values")) {
            if (!v.is_number()) throw subrisk::ConfigError("ruin.u_values: must be numbers");
            u_values.push_back(v.get<double>());
        }
    } else if (model.capital) {
        u_values.push_back(*model.capital);
    } else {
        throw subrisk::ConfigError("ruin.u_values: required (or set model.capital)");
    }
    double horizon = 1000.0;
    std::uint64_t n_paths = 100000, n_geom = 1000000;
    if (section.contains("horizon")) horizon = subrisk::config::require_positive(section, "ruin", "horizon");
    if (section.contains("n_paths")) n_paths = subrisk::config::require_uint(section, "ruin", "n_paths");
    if (section.contains("n_geom")) n_geom = subrisk::config::require_uint(section, "ruin", "n_geom");
    const std::uint64_t seed = resolve_seed(cfg, args);

    const auto tail_class = model.process.classify_y_tail();
    const bool light = tail_class.tail == subrisk::SubordinatedCPP::TailClass::light;
    const auto rv = subrisk::rv_spec_of_subordinator(model.process.subordinator());

    // shared across capital levels: the adjustment root does not depend on u
    std::optional<subrisk::AdjustmentResult> adj;
    std::string adj_failure_kind, adj_failure_note;
    if (light) {
        try {
            adj = subrisk::solve_adjustment(
                subrisk::RiskModel(u_values.front(), *model.premium, model.process));
        } catch (const subrisk::PreconditionError& e) {
            adj_failure_kind = e.kind();
            adj_failure_note = e.what();
        }
    }

    subrisk::csv::Table table;
    table.header = {"u", "method", "estimate", "std_error", "n", "horizon", "seed", "status",
                    "note"};
    const std::string seed_str = subrisk::csv::format_uint(seed);
    auto add_row = [&table](double u, const std::string& method, const std::string& estimate,
                            const std::string& se, const std::string& n, const std::string& hor,
                            const std::string& seed_s, const std::string& status,
                            const std::string& note) {
        table.rows.push_back({subrisk::csv::format_double(u), method, estimate, se, n, hor,
                              seed_s, status, note});
    };

    for (const double u : u_values) {
        const subrisk::RiskModel m(u, *model.premium, model.process);

        const auto mc = subrisk::mc_ruin(m, horizon, n_paths, seed);
        add_row(u, "mc", subrisk::csv::format_double(mc.point),
                subrisk::csv::format_double(mc.std_error), subrisk::csv::format_uint(mc.n_paths),
                subrisk::csv::format_double(mc.horizon), seed_str, "ok", mc.note);

        try {
            const auto pk = subrisk::pk_exact_ruin(m, n_geom, seed);
            add_row(u, "pk", subrisk::csv::format_double(pk.point),
                    subrisk::csv::format_double(pk.std_error),
                    subrisk::csv::format_uint(pk.n_paths),
                    subrisk::csv::format_double(pk.horizon), seed_str, "ok", pk.note);
        } catch (const subrisk::PreconditionError& e) {
            add_row(u, "pk", "", "", "", "", "", "error", e.kind());
        }

        if (!light) {
            add_row(u, "cl_asymptote", "", "", "", "", "", "skipped",
                    subrisk::errkind::heavy_tail);
        } else if (adj) {
            try {
                const double v = subrisk::cl_asymptotic_ruin(m, *adj, u);
                add_row(u, "cl_asymptote", subrisk::csv::format_double(v), "", "", "inf", "",
                        "ok", "");
            } catch (const subrisk::PreconditionError& e) {
                add_row(u, "cl_asymptote", "", "", "", "", "", "error", e.kind());
            }
        } else {
            add_row(u, "cl_asymptote", "", "", "", "", "", "error", adj_failure_kind);
        }

        if (!rv) {
            add_row(u, "karamata_asymptote", "", "", "", "", "", "skipped",
                    subrisk::errkind::not_regularly_varying);
        } else {
            try {
                const double v = subrisk::karamata_ruin_asymptotic(m, *rv, u);
                add_row(u, "karamata_asymptote", subrisk::csv::format_double(v), "", "", "inf",
                        "", "ok", "");
            } catch (const subrisk::PreconditionError& e) {
                add_row(u, "karamata_asymptote", "", "", "", "", "", "error", e.kind());
            }
        }
    }

    write_text(resolve_out(cfg, args), table_to_string(table));
    return 0;
}

int cmd_sweep(const json& cfg, const CommonArgs& args) {
    const auto model =
        subrisk::config::parse_model(subrisk::config::require_field(cfg, "", "model"), "model");
    const json& section = command_section(cfg, "sweep");
    if (!model.premium) throw subrisk::ConfigError("model.premium: required for this command");

    std::vector<double> u_grid;
    const json& grid = subrisk::config::require_field(section, "sweep", "u_grid");
    if (!grid.is_array() || grid.empty()) {
        throw subrisk::ConfigError("sweep.u_grid: must be a nonempty array");
    }
    for (const auto& v : grid) {
        if (!v.is_number()) throw subrisk::ConfigError("sweep.u_grid: must be numbers");
        u_grid.push_back(v.get<double>());
    }
    const double horizon = subrisk::config::require_positive(section, "sweep", "horizon");
    const std::uint64_t n_paths = subrisk::config::require_uint(section, "sweep", "n_paths");
    const std::uint64_t seed = resolve_seed(cfg, args);

    const subrisk::RiskModel m(u_grid.front() >= 0 ? u_grid.front() : 0.0, *model.premium,
                               model.process);
    const auto rows = subrisk::tail_horizon_sweep(m, u_grid, horizon, n_paths, seed);

    subrisk::csv::Table table;
    table.header = {"u", "estimate", "std_error", "n_paths", "horizon", "seed"};
    for (const auto& row : rows) {
        table.rows.push_back({subrisk::csv::format_double(row.u),
                              subrisk::csv::format_double(row.estimate.point),
                              subrisk::csv::format_double(row.estimate.std_error),
                              subrisk::csv::format_uint(row.estimate.n_paths),
                              subrisk::csv::format_double(row.estimate.horizon),
                              subrisk::csv::format_uint(row.estimate.seed)});
    }
    write_text(resolve_out(cfg, args), table_to_string(table));
    return 0;
}

int cmd_trajectory(const json& cfg, const CommonArgs& args) {
    const auto model =
        subrisk::config::parse_model(subrisk::config::require_field(cfg, "", "model"), "model");
    const json& section = command_section(cfg, "trajectory");
    if (!model.premium) throw subrisk::ConfigError("model.premium: required for this command");
    if (!model.capital) throw subrisk::ConfigError("model.capital: required for this command");
    const double horizon = subrisk::config::require_positive(section, "trajectory", "horizon");
    const std::uint64_t seed = resolve_seed(cfg, args);

    const subrisk::RiskModel m(*model.capital, *model.premium, model.process);
    subrisk::RandomSource rng(seed);
    const auto points = subrisk::surplus_trajectory(m, horizon, rng);

    subrisk::csv::Table table;
    table.header = {"t", "surplus"};
    for (const auto& pt : points) {
        table.rows.push_back(
            {subrisk::csv::format_double(pt.t), subrisk::csv::format_double(pt.surplus)});
    }
    write_text(resolve_out(cfg, args), table_to_string(table));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"subordinated compound Poisson risk processes: construction, "
                 "adjustment coefficients, heavy-tail asymptotics, and ruin Monte Carlo"};
    app.require_subcommand(1);

    CommonArgs args;
    std::uint64_t seed_flag = 0;

    const char* names[] = {"inspect", "adjustment", "zhist", "ruin", "sweep", "trajectory"};
    const char* descs[] = {
        "report derived quantities of the configured process",
        "adjustment-function curves and coefficients (figure-3 style tables)",
        "paired Z and X samples for histogramming (figure-2 style tables)",
        "ruin probability per capital level and method (MC, PK, asymptotes)",
        "finite-horizon MC ruin estimates over a capital grid",
        "one surplus path as a (t, surplus) table",
    };
    for (int i = 0; i < 6; ++i) {
        auto* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("config", args.config_path, "JSON experiment config")->required();
        sub->add_option("-o,--out", args.out_path, "output file (default: config 'output' or stdout)");
        sub->add_option("--seed", seed_flag, "override the config seed")
            ->each([&args, &seed_flag](const std::string&) { args.seed_override = seed_flag; });
        sub->add_flag("-v,--verbose", args.verbose, "progress notes on stderr");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const json cfg = load_config(args.config_path);
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "inspect") return cmd_inspect(cfg, args);
        if (cmd == "adjustment") return cmd_adjustment(cfg, args);
        if (cmd == "zhist") return cmd_zhist(cfg, args);
        if (cmd == "ruin") return cmd_ruin(cfg, args);
        if (cmd == "sweep") return cmd_sweep(cfg, args);
        if (cmd == "trajectory") return cmd_trajectory(cfg, args);
        std::cerr << "error: unknown command\n";
        return 4;
    } catch (const subrisk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const subrisk::PreconditionError& e) {
        std::cerr << "precondition error [" << e.kind() << "]: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
