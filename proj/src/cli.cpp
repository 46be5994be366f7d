#include "renewal/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "renewal/cases.hpp"
#include "renewal/io.hpp"
#include "renewal/montecarlo.hpp"

namespace renewal {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

ConvMethod parse_method(const std::string& m) {
    if (m == "naive") return ConvMethod::naive;
    if (m == "fft") return ConvMethod::fft;
    throw std::invalid_argument("method must be naive or fft");
}

// --grid geometric:start:stop:ratio
struct GridSpec {
    std::size_t start = 0, stop = 0;
    double ratio = 2.0;
    bool set = false;
};

GridSpec parse_grid(const std::string& s) {
    GridSpec g;
    if (s.empty()) return g;
    const auto parts = split(s, ':');
    if (parts.size() < 3 || parts[0] != "geometric")
        throw std::invalid_argument("grid spec must be geometric:start:stop[:ratio]");
    g.start = std::stoull(parts[1]);
    g.stop = std::stoull(parts[2]);
    if (parts.size() > 3) g.ratio = std::stod(parts[3]);
    g.set = true;
    return g;
}

int map_exception(const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    try {
        throw;
    } catch (const std::out_of_range&) {
        return kCliHorizonOverflow;
    } catch (const std::domain_error&) {
        return kCliInapplicable;
    } catch (const std::exception&) {
        return kCliBadConfig;
    }
}

}  // namespace

GapLaw parse_law_spec(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) {
        const auto parts = split(spec, ':');
        if (parts.size() < 2) throw std::invalid_argument("empty builtin spec");
        const std::string& name = parts[1];
        auto need = [&](std::size_t n) {
            if (parts.size() < n + 2)
                throw std::invalid_argument("builtin:" + name + ": missing parameters");
        };
        if (name == "ssrw") {
            need(1);
            return GapLaw::ssrw(std::stoull(parts[2]));
        }
        if (name == "geometric") {
            need(2);
            return GapLaw::geometric(std::stod(parts[2]), std::stoull(parts[3]));
        }
        if (name == "deterministic") {
            need(1);
            return GapLaw::deterministic(std::stoull(parts[2]));
        }
        if (name == "regvarying") {
            // builtin:regvarying:alpha:horizon[:defect[:c[:a]]]
            need(2);
            const double alpha = std::stod(parts[2]);
            const std::size_t horizon = std::stoull(parts[3]);
            const double defect = parts.size() > 4 ? std::stod(parts[4]) : 0.0;
            const double c = parts.size() > 5 ? std::stod(parts[5]) : 1.0;
            const double a = parts.size() > 6 ? std::stod(parts[6]) : 0.0;
            return GapLaw::reg_varying(alpha, SlowVary::product(c, a), horizon, defect);
        }
        throw std::invalid_argument("unknown builtin law: " + name);
    }
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("cannot open law file: " + spec);
    nlohmann::json j;
    in >> j;
    return GapLaw::from_json(j);
}

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"exact finite-horizon renewal quantities for two independent "
                 "renewal processes and their intersection, with asymptotic "
                 "verification and Monte Carlo cross-checks"};
    app.require_subcommand(1);

    // ---- law ----
    auto* law_cmd = app.add_subcommand("law", "build a law and write it as JSON");
    std::string law_spec, law_out;
    bool law_pmf = false;
    law_cmd->add_option("--spec", law_spec, "builtin:... spec or input JSON path")
        ->required();
    law_cmd->add_option("--out", law_out, "output JSON path")->required();
    law_cmd->add_flag("--include-pmf", law_pmf, "embed the pmf table");

    // ---- mass ----
    auto* mass_cmd = app.add_subcommand("mass", "renewal mass function as CSV");
    std::string mass_law, mass_out, mass_method = "fft";
    std::size_t mass_n = 0;
    mass_cmd->add_option("--law", mass_law, "law spec or JSON path")->required();
    mass_cmd->add_option("--n", mass_n, "compute u_0..u_n")->required();
    mass_cmd->add_option("--method", mass_method, "naive|fft");
    mass_cmd->add_option("--out", mass_out, "output CSV path")->required();

    // ---- intersect ----
    auto* int_cmd = app.add_subcommand("intersect", "intersection model CSV + JSON");
    std::string int_tau, int_sigma, int_dir, int_method = "fft";
    std::size_t int_n = 0;
    int_cmd->add_option("--tau", int_tau, "law spec for tau")->required();
    int_cmd->add_option("--sigma", int_sigma, "law spec for sigma")->required();
    int_cmd->add_option("--n", int_n, "model length")->required();
    int_cmd->add_option("--method", int_method, "naive|fft");
    int_cmd->add_option("--out", int_dir, "output directory")->required();

    // ---- verify ----
    auto* ver_cmd = app.add_subcommand("verify", "run asymptotic verification cases");
    std::vector<std::string> ver_cases;
    std::string ver_dir, ver_method = "fft", ver_grid;
    std::size_t ver_nmax = 0;
    bool ver_list = false;
    ver_cmd->add_option("--case", ver_cases, "case id (repeatable; default all)");
    ver_cmd->add_option("--nmax", ver_nmax, "override the case's top n");
    ver_cmd->add_option("--method", ver_method, "naive|fft");
    ver_cmd->add_option("--grid", ver_grid, "geometric:start:stop[:ratio]");
    ver_cmd->add_option("--out", ver_dir, "output directory for CSV/JSON");
    ver_cmd->add_flag("--list", ver_list, "list available cases and exit");

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo cross-validation");
    std::string sim_tau, sim_sigma, sim_stat = "rho-tail", sim_out, sim_grid;
    SimOptions sim_opt;
    sim_cmd->add_option("--tau", sim_tau, "law spec for tau")->required();
    sim_cmd->add_option("--sigma", sim_sigma, "law spec for sigma");
    sim_cmd->add_option("--statistic", sim_stat,
                        "rho-tail|rho-mean|hitting-index|coupled-increment");
    sim_cmd->add_option("--samples", sim_opt.runs, "number of runs");
    sim_cmd->add_option("--seed", sim_opt.seed, "RNG seed")->required();
    sim_cmd->add_option("--horizon", sim_opt.horizon, "censoring horizon");
    sim_cmd->add_option("--workers", sim_opt.workers, "logical worker shards");
    sim_cmd->add_option("--grid", sim_grid, "geometric:start:stop[:ratio]");
    sim_cmd->add_option("--out", sim_out, "output JSON path");

    try {
        std::vector<std::string> argv_rev(args.rbegin(), args.rend());
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kCliOk : kCliBadConfig;
    }

    try {
        if (*law_cmd) {
            const GapLaw law = parse_law_spec(law_spec);
            io::write_text_atomic(law_out, law.to_json(law_pmf).dump(2) + "\n");
            return kCliOk;
        }

        if (*mass_cmd) {
            const GapLaw law = parse_law_spec(mass_law);
            const MassFunction mf = mass_function(law, mass_n, parse_method(mass_method));
            io::write_text_atomic(mass_out, io::mass_csv(mf));
            return kCliOk;
        }

        if (*int_cmd) {
            const GapLaw tau = parse_law_spec(int_tau);
            const GapLaw sigma = parse_law_spec(int_sigma);
            const ConvMethod method = parse_method(int_method);
            const MassFunction mt = mass_function(tau, int_n, method);
            const MassFunction ms = mass_function(sigma, int_n, method);
            const IntersectionModel model = build(tau, mt, sigma, ms, int_n, method);
            std::filesystem::create_directories(int_dir);
            io::write_text_atomic(int_dir + "/model.csv", io::model_csv(model));
            io::write_text_atomic(int_dir + "/classify.json",
                                  io::classification_json(model.cls));
            return kCliOk;
        }

        if (*ver_cmd) {
            if (ver_list) {
                for (const auto& id : cases::list()) std::cout << id << "\n";
                return kCliOk;
            }
            cases::RunOptions opt;
            opt.nmax = ver_nmax;
            opt.method = parse_method(ver_method);
            const GridSpec gs = parse_grid(ver_grid);
            if (gs.set) {
                opt.grid_start = gs.start;
                opt.grid_ratio = gs.ratio;
                if (opt.nmax == 0) opt.nmax = gs.stop;
            }
            std::vector<std::string> ids = ver_cases.empty() ? cases::list() : ver_cases;
            for (const auto& id : ids)
                if (!cases::known(id))
                    throw std::invalid_argument("unknown case: " + id);

            nlohmann::json failures = nlohmann::json::array();
            bool all_pass = true;
            if (!ver_dir.empty()) std::filesystem::create_directories(ver_dir);
            for (const auto& id : ids) {
                const cases::CaseResult res = cases::run(id, opt);
                std::printf("[%s] %s: %s\n", res.pass ? "PASS" : "FAIL", id.c_str(),
                            res.detail.c_str());
                if (!ver_dir.empty()) {
                    io::write_text_atomic(ver_dir + "/" + id + ".csv",
                                          io::report_csv(res.report));
                    io::write_text_atomic(ver_dir + "/" + id + ".verdict.json",
                                          res.verdict.dump(2) + "\n");
                }
                if (!res.pass) {
                    all_pass = false;
                    failures.push_back(res.verdict);
                }
            }
            if (!all_pass) {
                nlohmann::json out;
                out["failures"] = failures;
                std::cout << out.dump(2) << "\n";
                if (!ver_dir.empty())
                    io::write_text_atomic(ver_dir + "/failures.json",
                                          out.dump(2) + "\n");
                return kCliVerdictFailed;
            }
            return kCliOk;
        }

        if (*sim_cmd) {
            const GapLaw tau = parse_law_spec(sim_tau);
            std::vector<std::uint64_t> grid;
            const GridSpec gs = parse_grid(sim_grid);
            if (gs.set)
                for (std::size_t n : geometric_grid(gs.start, gs.stop, gs.ratio))
                    grid.push_back(n);

            nlohmann::json j;
            if (sim_stat == "coupled-increment") {
                if (grid.empty()) grid = {8, 64, 512};
                const auto rows = estimate_coupled_increment(tau, grid, sim_opt);
                j = nlohmann::json::array();
                for (const auto& row : rows) {
                    nlohmann::json r = row.bound.to_json();
                    r["p_tau"] = row.p_tau;
                    r["p_sigma"] = row.p_sigma;
                    j.push_back(r);
                }
            } else {
                if (sim_sigma.empty())
                    throw std::invalid_argument("--sigma required for this statistic");
                const GapLaw sigma = parse_law_spec(sim_sigma);
                if (sim_stat == "rho-tail") {
                    if (grid.empty()) grid = {8, 64, 512};
                    j = nlohmann::json::array();
                    for (const auto& est : estimate_rho_tail(tau, sigma, grid, sim_opt))
                        j.push_back(est.to_json());
                } else if (sim_stat == "rho-mean") {
                    j = estimate_rho1_mean(tau, sigma, sim_opt).to_json();
                } else if (sim_stat == "hitting-index") {
                    j = estimate_hitting_index(tau, sigma, sim_opt).to_json();
                } else {
                    throw std::invalid_argument("unknown statistic: " + sim_stat);
                }
            }
            const std::string text = j.dump(2) + "\n";
            if (!sim_out.empty())
                io::write_text_atomic(sim_out, text);
            else
                std::cout << text;
            return kCliOk;
        }
    } catch (const std::exception& e) {
        return map_exception(e);
    }
    return kCliBadConfig;
}

}  // namespace renewal
