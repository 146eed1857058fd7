// Batch driver: quench scans, size scaling, and correlation-matrix structure
// reports, emitted as CSV plus a JSON sidecar. Output bodies are
// deterministic for a fixed config, seed, and worker count; wall-clock data
// stays in the sidecar.

#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qperm/correlations.hpp"
#include "qperm/ed_oracle.hpp"
#include "qperm/entropy.hpp"
#include "qperm/single_particle.hpp"

using nlohmann::json;
using namespace qperm;

namespace {

constexpr const char* kVersion = "0.1.0";

std::atomic<bool> g_interrupted{false};

void handle_sigint(int) { g_interrupted.store(true); }

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScanConfig {
    std::string state = "MI";
    std::vector<int> sizes;
    int la = 0;  // 0 = half cut
    double tmin = 0.1;
    double tmax = 1000.0;
    int tpoints = 64;
    std::string tgrid = "log";
    std::string engine = "bbfg";
    int workers = 1;
    std::uint64_t seed = 1;
    std::string out = "scan.csv";
    bool gaussian = false;
    bool page = false;
    bool timings = false;
    int page_samples = 1024;
    double structure_eps = 1e-10;
};

json to_json(const ScanConfig& c) {
    return json{{"state", c.state},       {"sizes", c.sizes},
                {"la", c.la},             {"tmin", c.tmin},
                {"tmax", c.tmax},         {"tpoints", c.tpoints},
                {"tgrid", c.tgrid},       {"engine", c.engine},
                {"workers", c.workers},   {"seed", c.seed},
                {"out", c.out},           {"gaussian", c.gaussian},
                {"page", c.page},         {"timings", c.timings},
                {"page_samples", c.page_samples},
                {"structure_eps", c.structure_eps}};
}

void from_json_file(const std::string& path, ScanConfig& c) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    in >> j;
    c.state = j.value("state", c.state);
    c.sizes = j.value("sizes", c.sizes);
    c.la = j.value("la", c.la);
    c.tmin = j.value("tmin", c.tmin);
    c.tmax = j.value("tmax", c.tmax);
    c.tpoints = j.value("tpoints", c.tpoints);
    c.tgrid = j.value("tgrid", c.tgrid);
    c.engine = j.value("engine", c.engine);
    c.workers = j.value("workers", c.workers);
    c.seed = j.value("seed", c.seed);
    c.out = j.value("out", c.out);
    c.gaussian = j.value("gaussian", c.gaussian);
    c.page = j.value("page", c.page);
    c.timings = j.value("timings", c.timings);
    c.page_samples = j.value("page_samples", c.page_samples);
    c.structure_eps = j.value("structure_eps", c.structure_eps);
}

InitialState parse_state(const std::string& s) {
    if (s == "MI" || s == "mi") return InitialState::MI;
    if (s == "CDW" || s == "cdw") return InitialState::CDW;
    throw ConfigError("unknown state: " + s + " (expected MI or CDW)");
}

PermMethod parse_engine(const std::string& s) {
    if (s == "naive") return PermMethod::naive;
    if (s == "ryser") return PermMethod::ryser;
    if (s == "bbfg") return PermMethod::bbfg;
    if (s == "bbfg-par" || s == "bbfg_parallel") return PermMethod::bbfg_parallel;
    throw ConfigError("unknown engine: " + s);
}

std::vector<double> time_grid(const ScanConfig& c) {
    if (c.tpoints < 1) throw ConfigError("time grid must be nonempty");
    if (c.tmax < c.tmin) throw ConfigError("tmax must be >= tmin");
    std::vector<double> grid;
    if (c.tpoints == 1) {
        grid.push_back(c.tmin);
        return grid;
    }
    if (c.tgrid == "log") {
        if (c.tmin <= 0.0) throw ConfigError("log grid requires tmin > 0");
        const double r = std::log(c.tmax / c.tmin) / (c.tpoints - 1);
        for (int i = 0; i < c.tpoints; ++i) grid.push_back(c.tmin * std::exp(r * i));
    } else if (c.tgrid == "lin") {
        const double d = (c.tmax - c.tmin) / (c.tpoints - 1);
        for (int i = 0; i < c.tpoints; ++i) grid.push_back(c.tmin + d * i);
    } else {
        throw ConfigError("tgrid must be lin or log");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] <= grid[i - 1]) throw ConfigError("time grid must be strictly increasing");
    }
    return grid;
}

void check_feasible(InitialState state, int sites) {
    if (state == InitialState::MI && sites > 25) {
        throw InfeasibleError("MI permanents need a 2L x 2L matrix; L > 25 exceeds the "
                              "~50x50 permanent frontier. Use CDW or L <= 25.");
    }
    if (state == InitialState::CDW && sites > 50) {
        throw InfeasibleError("CDW permanents need an L x L matrix; L > 50 exceeds the "
                              "~50x50 permanent frontier.");
    }
    if (state == InitialState::CDW && sites % 2 != 0) {
        throw ConfigError("CDW requires an even L");
    }
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int cut_sites(const ScanConfig& c, int sites) {
    const int la = c.la > 0 ? c.la : sites / 2;
    if (la < 1 || la > sites - 1) throw ConfigError("cut must satisfy 1 <= L_A <= L-1");
    return la;
}

json make_sidecar(const ScanConfig& cfg, std::chrono::system_clock::time_point start) {
    json side;
    side["tool"] = "qperm";
    side["version"] = kVersion;
    side["config"] = to_json(cfg);
    side["started_at"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                             start.time_since_epoch())
                             .count();
    return side;
}

void finish_sidecar(json& side, const std::string& out,
                    std::chrono::system_clock::time_point start) {
    const auto end = std::chrono::system_clock::now();
    side["finished_at"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(end.time_since_epoch()).count();
    side["elapsed_seconds"] = std::chrono::duration<double>(end - start).count();
    side["interrupted"] = g_interrupted.load();
    std::ofstream js(out + ".json");
    js << side.dump(2) << "\n";
}

int run_scan(const ScanConfig& cfg) {
    const InitialState state = parse_state(cfg.state);
    const PermMethod engine = parse_engine(cfg.engine);
    if (cfg.sizes.empty()) throw ConfigError("no sizes given");
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
    for (const int sites : cfg.sizes) check_feasible(state, sites);
    const std::vector<double> grid = time_grid(cfg);

    const auto start = std::chrono::system_clock::now();
    json side = make_sidecar(cfg, start);

    std::ofstream csv(cfg.out);
    if (!csv) throw ConfigError("cannot open output file: " + cfg.out);
    csv << "state,L,L_A,tJ,S2,S2_gaussian,s_tilde,g,lower_bound,perm_method,perm_seconds,seed\n";

    json timings = json::array();
    long rows = 0;
    for (const int sites : cfg.sizes) {
        const SpectralBasis basis = solve_open_chain({sites, 1.0});
        const CutSpec cut{cut_sites(cfg, sites)};
        for (const double tj : grid) {
            if (g_interrupted.load()) break;
            const Propagator y = propagator(basis, tj);
            const SwapMatrix a = build_swap_matrix(build_z(y, state, cut));
            const EntropyPoint pt = renyi2(a, engine, cfg.workers);
            std::optional<double> s2g;
            if (cfg.gaussian) s2g = gaussian_renyi(one_body_matrix(y, state, cut));

            if (pt.s2 < pt.lower_bound) {
                throw NumericalBreakdown(
                    "rigorous bound violated at L=" + std::to_string(sites) +
                    " tJ=" + fmt(tj) + ": S2=" + fmt(pt.s2) + " < " + fmt(pt.lower_bound));
            }

            csv << to_string(state) << ',' << sites << ',' << cut.la << ',' << fmt(tj) << ','
                << fmt(pt.s2) << ',' << (s2g ? fmt(*s2g) : "") << ',' << fmt(pt.s_tilde) << ','
                << fmt(pt.g) << ',' << fmt(pt.lower_bound) << ',' << to_string(pt.method) << ','
                << (cfg.timings ? fmt(pt.perm_seconds) : "") << ',' << cfg.seed << '\n';
            csv.flush();
            ++rows;
            timings.push_back(pt.perm_seconds);
        }
        if (g_interrupted.load()) break;
    }
    side["rows"] = rows;
    side["perm_seconds"] = timings;
    finish_sidecar(side, cfg.out, start);
    return g_interrupted.load() ? 130 : 0;
}

std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    // least squares y = c0 + c1 x
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    const double c1 = (n * sxy - sx * sy) / det;
    const double c0 = (sy - c1 * sx) / n;
    return {c0, c1};
}

int run_size_scaling(const ScanConfig& cfg) {
    const InitialState state = parse_state(cfg.state);
    const PermMethod engine = parse_engine(cfg.engine);
    if (cfg.sizes.empty()) throw ConfigError("no sizes given");
    for (const int sites : cfg.sizes) {
        check_feasible(state, sites);
        if (cfg.page) {
            const int cap = state == InitialState::MI ? 12 : 16;
            if (sites > cap) {
                throw InfeasibleError("page value limited to L <= " + std::to_string(cap) +
                                      " for " + cfg.state);
            }
        }
    }
    const std::vector<double> grid = time_grid(cfg);

    const auto start = std::chrono::system_clock::now();
    json side = make_sidecar(cfg, start);

    std::ofstream csv(cfg.out);
    if (!csv) throw ConfigError("cannot open output file: " + cfg.out);
    csv << "state,L,inv_L,s2_density,s2_samples,gaussian_density,page_density,page_stderr,seed\n";

    // long-time window for the Gaussian reference (200 log-spaced points)
    std::vector<double> gwindow;
    for (int i = 0; i < 200; ++i) {
        gwindow.push_back(std::exp(std::log(1.0) + std::log(1e4 / 1.0) * i / 199.0));
    }

    std::vector<double> invl, s2d, paged;
    for (const int sites : cfg.sizes) {
        if (g_interrupted.load()) break;
        const SpectralBasis basis = solve_open_chain({sites, 1.0});
        const CutSpec cut{cut_sites(cfg, sites)};

        double s2sum = 0.0;
        for (const double tj : grid) {
            const SwapMatrix a = build_swap_matrix(build_z(propagator(basis, tj), state, cut));
            s2sum += renyi2(a, engine, cfg.workers).s2;
        }
        const double s2_density = s2sum / grid.size() / sites;

        std::string gtxt, ptxt, petxt;
        if (cfg.gaussian) {
            double gsum = 0.0;
            for (const double tj : gwindow) {
                gsum += gaussian_renyi(one_body_matrix(propagator(basis, tj), state, cut));
            }
            gtxt = fmt(gsum / gwindow.size() / sites);
        }
        double pmean = 0.0;
        if (cfg.page) {
            const FockBasis fock = enumerate_basis(sites, particle_count(state, sites));
            const auto [mean, se] = page_value(fock, cut, cfg.page_samples, cfg.seed);
            pmean = mean / sites;
            ptxt = fmt(pmean);
            petxt = fmt(se / sites);
        }

        csv << to_string(state) << ',' << sites << ',' << fmt(1.0 / sites) << ','
            << fmt(s2_density) << ',' << grid.size() << ',' << gtxt << ',' << ptxt << ','
            << petxt << ',' << cfg.seed << '\n';
        csv.flush();
        invl.push_back(1.0 / sites);
        s2d.push_back(s2_density);
        if (cfg.page) paged.push_back(pmean);
    }

    // linear fits vs 1/L over the five largest sizes
    if (invl.size() >= 2) {
        const std::size_t nfit = std::min<std::size_t>(5, invl.size());
        std::vector<double> fx(invl.end() - nfit, invl.end());
        std::vector<double> fy(s2d.end() - nfit, s2d.end());
        // sizes ascending means the largest L are the last entries only if
        // the user listed them that way; sort by 1/L to be safe
        std::vector<std::size_t> order(invl.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return invl[a] < invl[b]; });
        fx.clear();
        fy.clear();
        for (std::size_t i = 0; i < nfit; ++i) {
            fx.push_back(invl[order[i]]);
            fy.push_back(s2d[order[i]]);
        }
        const auto [c0, c1] = fit_line(fx, fy);
        side["s2_density_fit"] = {{"intercept", c0}, {"slope", c1}, {"points", nfit}};
        if (cfg.page && paged.size() == invl.size()) {
            fy.clear();
            for (std::size_t i = 0; i < nfit; ++i) fy.push_back(paged[order[i]]);
            const auto [p0, p1] = fit_line(fx, fy);
            side["page_density_fit"] = {{"intercept", p0}, {"slope", p1}, {"points", nfit}};
        }
    }
    finish_sidecar(side, cfg.out, start);
    return g_interrupted.load() ? 130 : 0;
}

int run_structure(const ScanConfig& cfg) {
    const InitialState state = parse_state(cfg.state);
    if (state != InitialState::MI) throw ConfigError("structure reports are defined for MI");
    if (cfg.sizes.empty()) throw ConfigError("no sizes given");
    const std::vector<double> grid = time_grid(cfg);

    const auto start = std::chrono::system_clock::now();
    json side = make_sidecar(cfg, start);

    json reports = json::array();
    for (const int sites : cfg.sizes) {
        const SpectralBasis basis = solve_open_chain({sites, 1.0});
        const CutSpec cut{cut_sites(cfg, sites)};
        for (const double tj : grid) {
            if (g_interrupted.load()) break;
            const CorrelationMatrix z = build_z(propagator(basis, tj), state, cut);
            const StructureReport rep = z_block_structure(z, cfg.structure_eps);
            reports.push_back({{"L", rep.sites},
                               {"tJ", rep.tj},
                               {"eps", rep.eps},
                               {"support_width", rep.support_width},
                               {"beta", rep.beta},
                               {"four_tJ", rep.four_tj},
                               {"identity_residual", rep.identity_residual},
                               {"zero_residual", rep.zero_residual},
                               {"block_valid", rep.block_valid}});
        }
    }
    json out;
    out["reports"] = reports;
    std::ofstream os(cfg.out);
    if (!os) throw ConfigError("cannot open output file: " + cfg.out);
    os << out.dump(2) << "\n";
    finish_sidecar(side, cfg.out, start);
    return g_interrupted.load() ? 130 : 0;
}

void add_common_options(CLI::App* cmd, ScanConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file (flags override it)");
    cmd->add_option("--state", cfg.state, "initial state: MI or CDW");
    cmd->add_option("--sizes", cfg.sizes, "system sizes L")->delimiter(',');
    cmd->add_option("--la", cfg.la, "subsystem size L_A (default: L/2)");
    cmd->add_option("--tmin", cfg.tmin, "first tJ");
    cmd->add_option("--tmax", cfg.tmax, "last tJ");
    cmd->add_option("--tpoints", cfg.tpoints, "number of time points");
    cmd->add_option("--tgrid", cfg.tgrid, "time grid: lin or log");
    cmd->add_option("--engine", cfg.engine, "permanent engine: naive, ryser, bbfg, bbfg-par");
    cmd->add_option("--workers", cfg.workers, "permanent worker count");
    cmd->add_option("--seed", cfg.seed, "RNG seed (recorded in every row)");
    cmd->add_option("--out", cfg.out, "output file");
    cmd->add_flag("--gaussian,!--no-gaussian", cfg.gaussian, "Gaussian reference entropy");
    cmd->add_flag("--page,!--no-page", cfg.page, "Page-value estimate (size scaling)");
    cmd->add_flag("--timings", cfg.timings, "emit per-row permanent timings in the CSV");
    cmd->add_option("--page-samples", cfg.page_samples, "random vectors per Page estimate");
    cmd->add_option("--structure-eps", cfg.structure_eps, "threshold for structure reports");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Second Renyi entanglement entropy of quenched 1D free bosons "
                 "via matrix permanents"};
    app.require_subcommand(1);

    ScanConfig cfg;
    std::string config_path;

    auto* scan = app.add_subcommand("scan", "S2(t) scan over sizes and times");
    auto* scaling = app.add_subcommand("size-scaling", "time-averaged densities vs 1/L");
    auto* structure = app.add_subcommand("structure", "correlation-matrix block structure reports");
    for (auto* cmd : {scan, scaling, structure}) add_common_options(cmd, cfg, config_path);

    // pre-scan for --config so file values load before flag overrides
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                from_json_file(argv[i + 1], cfg);
            } catch (const std::exception& e) {
                std::cerr << json{{"category", "config"}, {"message", e.what()}} << "\n";
                return 2;
            }
        }
    }

    CLI11_PARSE(app, argc, argv);
    std::signal(SIGINT, handle_sigint);

    try {
        if (scan->parsed()) return run_scan(cfg);
        if (scaling->parsed()) return run_size_scaling(cfg);
        if (structure->parsed()) return run_structure(cfg);
    } catch (const ConfigError& e) {
        std::cerr << json{{"category", "config"}, {"message", e.what()}} << "\n";
        return 2;
    } catch (const InfeasibleError& e) {
        std::cerr << json{{"category", "infeasible"}, {"message", e.what()}} << "\n";
        return 3;
    } catch (const NumericalBreakdown& e) {
        std::cerr << json{{"category", "numerical"}, {"message", e.what()}} << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << json{{"category", "error"}, {"message", e.what()}} << "\n";
        return 1;
    }
    return 0;
}
