#include "flatlab/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "flatlab/errors.hpp"
#include "flatlab/io.hpp"

namespace flatlab {

namespace {

namespace fs = std::filesystem;

std::string default_stamp() {
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

fs::path artifact_dir(const std::string& out, const std::string& stamp) {
    fs::path dir = fs::path(out) / (stamp.empty() ? default_stamp() : stamp);
    fs::create_directories(dir);
    return dir;
}

Coords parse_coords(const std::string& csv) {
    Coords out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ValidationError("cannot parse coordinate '" + item + "'");
        }
    }
    if (out.size() < 3) throw ValidationError("coordinates need at least 3 components");
    return out;
}

// Flat key=value config with optional JSON override.
std::map<std::string, std::string> parse_config(const std::string& path,
                                                const std::vector<std::string>& sets,
                                                const std::string& json_override) {
    std::map<std::string, std::string> kv;
    if (!path.empty()) {
        std::istringstream is(read_text_file(path));
        std::string line;
        while (std::getline(is, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
    }
    if (!json_override.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json_override);
        } catch (const std::exception& e) {
            throw ValidationError(std::string("malformed --json override: ") + e.what());
        }
        for (const auto& [k, v] : j.items())
            kv[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ValidationError("--set expects key=value");
        kv[s.substr(0, eq)] = s.substr(eq + 1);
    }
    return kv;
}

template <typename T>
std::vector<T> parse_list(const std::string& csv) {
    std::vector<T> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if constexpr (std::is_same_v<T, double>)
            out.push_back(std::stod(item));
        else
            out.push_back(static_cast<T>(std::stoull(item)));
    }
    return out;
}

SuiteConfig suite_from_kv(const std::map<std::string, std::string>& kv) {
    SuiteConfig cfg;
    auto get = [&](const std::string& k) -> const std::string* {
        auto it = kv.find(k);
        return it == kv.end() ? nullptr : &it->second;
    };
    try {
        if (auto* v = get("m")) cfg.m = std::stoi(*v);
        if (auto* v = get("schedule")) cfg.schedule = parse_list<double>(*v);
        if (auto* v = get("seeds")) cfg.seeds = parse_list<std::uint64_t>(*v);
        if (auto* v = get("sample_size")) cfg.sample_size = std::stoull(*v);
        if (auto* v = get("rho0_factor")) cfg.rho0_factor = std::stod(*v);
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception& e) {
        throw ValidationError(std::string("malformed config value: ") + e.what());
    }
    if (cfg.seeds.empty()) cfg.seeds = {1};
    if (const char* env = std::getenv("FLATLAB_SEED")) {
        try {
            cfg.seeds = {std::stoull(env)};
        } catch (const std::exception&) {
            throw ValidationError("FLATLAB_SEED must be an integer");
        }
    }
    if (cfg.m < 2) throw ValidationError("config m must be >= 2");
    if (cfg.sample_size < 1) throw ValidationError("config sample_size must be >= 1");
    if (cfg.schedule.empty()) throw ValidationError("config needs a schedule");
    for (std::size_t i = 1; i < cfg.schedule.size(); ++i)
        if (!(cfg.schedule[i] < cfg.schedule[i - 1]))
            throw ValidationError("config schedule must be strictly decreasing");
    return cfg;
}

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"sphere-with-threads metric geometry toolkit"};
    app.require_subcommand(1);

    std::string out = "runs", stamp;
    app.add_option("--out", out, "artifact output directory")->capture_default_str();
    app.add_option("--stamp", stamp, "override the timestamp subdirectory name");

    // net
    auto* cmd_net = app.add_subcommand("net", "build a separated covering family");
    int net_m = 2;
    double net_eps = 0.5;
    std::uint64_t net_seed = 1;
    cmd_net->add_option("--m", net_m, "sphere dimension")->capture_default_str();
    cmd_net->add_option("--eps", net_eps, "net scale in (0, pi)")->required();
    cmd_net->add_option("--seed", net_seed, "random seed")->capture_default_str();

    // threads
    auto* cmd_threads = app.add_subcommand("threads", "place endpoints and build threads");
    std::string threads_net;
    cmd_threads->add_option("--net", threads_net, "net artifact (net/1 JSON)")->required();

    // query
    auto* cmd_query = app.add_subcommand("query", "hybrid distance between two sphere points");
    std::string query_threads, query_x, query_y, query_dump;
    cmd_query->add_option("--threads", query_threads, "threads artifact")->required();
    cmd_query->add_option("--x", query_x, "comma separated coordinates")->required();
    cmd_query->add_option("--y", query_y, "comma separated coordinates")->required();
    cmd_query->add_option("--dump", query_dump,
                          "write endpoint pair distances (i,j,d_sphere,d_hybrid) to this CSV");

    // profile
    auto* cmd_profile = app.add_subcommand("profile", "generate a tunnel profile");
    int prof_m = 3;
    double prof_rho0 = 0.02, prof_rho = 0.1, prof_len = 1.0;
    bool prof_mesh = false;
    cmd_profile->add_option("--m", prof_m, "dimension")->capture_default_str();
    cmd_profile->add_option("--rho0", prof_rho0, "neck radius")->required();
    cmd_profile->add_option("--rho", prof_rho, "removed-ball radius")->required();
    cmd_profile->add_option("--L", prof_len, "graph length")->required();
    cmd_profile->add_flag("--mesh", prof_mesh, "also write a surface mesh (m == 2)");

    // budget
    auto* cmd_budget = app.add_subcommand("budget", "filling budgets");
    std::string budget_threads, budget_profile;
    double budget_rho0_factor = 0.5, budget_vol = 0.0, budget_diam = M_PI;
    cmd_budget->add_option("--threads", budget_threads, "threads artifact (iterated budget)");
    cmd_budget->add_option("--profile", budget_profile, "profile artifact (single budget)");
    cmd_budget->add_option("--rho0-factor", budget_rho0_factor, "neck radius factor")
        ->capture_default_str();
    cmd_budget->add_option("--vol", budget_vol, "host volume (default: unit sphere)");
    cmd_budget->add_option("--diam", budget_diam, "host diameter")->capture_default_str();

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "run the convergence suite");
    std::string verify_config, verify_json;
    std::vector<std::string> verify_sets;
    cmd_verify->add_option("--config", verify_config, "key=value config file");
    cmd_verify->add_option("--set", verify_sets, "override config entries (key=value)");
    cmd_verify->add_option("--json", verify_json, "JSON object merged over the config");

    // report
    auto* cmd_report = app.add_subcommand("report", "aggregate run artifacts");
    std::string report_runs;
    cmd_report->add_option("--runs", report_runs, "directory to scan for report JSON")->required();

    try {
        app.parse(argc, const_cast<char**>(const_cast<char* const*>(argv)));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (cmd_net->parsed()) {
        const Net net = build_net(net_m, net_eps, net_seed);
        const auto dir = artifact_dir(out, stamp);
        write_text_file(dir / "net.json", net_to_json(net));
        std::cout << "net: m=" << net_m << " eps=" << net_eps << " N=" << net.count() << " -> "
                  << (dir / "net.json").string() << "\n";
        return 0;
    }
    if (cmd_threads->parsed()) {
        const Net net = net_from_json(read_text_file(threads_net));
        const ThreadSystem ts = build_threads(place_endpoints(net));
        const auto dir = artifact_dir(out, stamp);
        write_text_file(dir / "threads.json", threads_to_json(ts));
        std::cout << "threads: N=" << ts.count() << " K=" << ts.thread_count()
                  << " rho=" << format_double(ts.rho) << " -> " << (dir / "threads.json").string()
                  << "\n";
        return 0;
    }
    if (cmd_query->parsed()) {
        const ThreadSystem ts = threads_from_json(read_text_file(query_threads));
        const HybridMetric metric = build_metric(ts);
        const SpherePoint x = sphere_point(parse_coords(query_x));
        const SpherePoint y = sphere_point(parse_coords(query_y));
        std::cout << format_double(distance(metric, x, y)) << "\n";
        if (!query_dump.empty()) {
            std::ostringstream os;
            os << "i,j,d_sphere,d_hybrid\n";
            const int v = metric.node_count();
            for (int a = 0; a < v; ++a) {
                const auto row =
                    distance_batch(metric, metric.nodes[a],
                                   std::span<const SpherePoint>(metric.nodes.data() + a + 1,
                                                                metric.nodes.size() - a - 1));
                for (int b = a + 1; b < v; ++b)
                    os << a << ',' << b << ','
                       << format_double(vec::geodesic_unit(metric.nodes[a].x, metric.nodes[b].x))
                       << ',' << format_double(row[b - a - 1]) << '\n';
            }
            write_text_file(query_dump, os.str());
        }
        return 0;
    }
    if (cmd_profile->parsed()) {
        const TunnelProfile p = generate_profile(prof_m, prof_rho0, prof_rho, prof_len);
        const auto dir = artifact_dir(out, stamp);
        write_text_file(dir / "profile.json", profile_to_json(p));
        {
            std::ostringstream os;
            write_profile_csv(p, os);
            write_text_file(dir / "profile.csv", os.str());
        }
        if (prof_mesh) {
            std::ostringstream os;
            write_profile_mesh(p, os);
            write_text_file(dir / "profile_mesh.txt", os.str());
        }
        std::cout << "profile: m=" << prof_m << " rho0=" << prof_rho0 << " L=" << prof_len
                  << " l_prime=" << format_double(p.l_prime) << " samples=" << p.samples.size()
                  << " -> " << (dir / "profile.json").string() << "\n";
        return 0;
    }
    if (cmd_budget->parsed()) {
        if (budget_threads.empty() && budget_profile.empty())
            throw ValidationError("budget needs --threads and/or --profile");
        const auto dir = artifact_dir(out, stamp);
        if (!budget_profile.empty()) {
            const TunnelProfile p = profile_from_json(read_text_file(budget_profile));
            const double vol = budget_vol > 0.0 ? budget_vol : sphere_area(p.m);
            const FillingBudget b = filling_budget(p, vol, budget_diam);
            write_text_file(dir / "budget_single.json", single_budget_to_json(b));
            std::cout << "budget: dF<=" << format_double(b.dF_bound)
                      << " dGH<=" << format_double(b.dGH_bound) << " -> "
                      << (dir / "budget_single.json").string() << "\n";
        }
        if (!budget_threads.empty()) {
            const ThreadSystem ts = threads_from_json(read_text_file(budget_threads));
            IteratedOptions opts;
            opts.rho0_factor = budget_rho0_factor;
            const IteratedBudget b = iterated_budget(ts, opts);
            write_text_file(dir / "budget.json", budget_to_json(b));
            std::cout << "budget: K=" << b.thread_count
                      << " total_dF<=" << format_double(b.total_dF)
                      << " total_dGH<=" << format_double(b.total_dGH) << " -> "
                      << (dir / "budget.json").string() << "\n";
        }
        return 0;
    }
    if (cmd_verify->parsed()) {
        const SuiteConfig cfg = suite_from_kv(parse_config(verify_config, verify_sets, verify_json));
        const ConvergenceReport report = run_convergence_suite(cfg);
        const auto dir = artifact_dir(out, stamp);
        write_text_file(dir / "report.json", report_to_json(report));
        write_text_file(dir / "report.csv", report_to_csv(report));
        {
            std::ostringstream sup, dfb;
            sup << "eps,sup_dev\n";
            dfb << "eps,dF_budget\n";
            for (const auto& r : report.per_eps) {
                sup << format_double(r.eps) << ',' << format_double(r.sup_deviation) << '\n';
                dfb << format_double(r.eps) << ',' << format_double(r.dF_budget) << '\n';
            }
            write_text_file(dir / "plot_sup_dev.csv", sup.str());
            write_text_file(dir / "plot_df_budget.csv", dfb.str());
        }
        bool all_ok = true;
        for (const auto& r : report.per_eps) {
            std::cout << "eps=" << r.eps;
            if (!r.ok) {
                std::cout << " construction failed: " << r.error << "\n";
                all_ok = false;
                continue;
            }
            std::cout << " N=" << r.n << " K=" << r.k << " sup_dev="
                      << format_double(r.sup_deviation) << " twelve_eps_ok=" << r.twelve_eps_ok
                      << " lambda_ok=" << r.lambda_ok << "\n";
            if (!r.twelve_eps_ok || !r.lambda_ok) all_ok = false;
        }
        std::cout << "report -> " << (dir / "report.json").string() << "\n";
        if (!all_ok) throw InvariantViolation("convergence gates failed; see report");
        return 0;
    }
    if (cmd_report->parsed()) {
        std::vector<std::pair<double, std::string>> rows;
        for (const auto& entry : fs::recursive_directory_iterator(report_runs)) {
            if (!entry.is_regular_file() || entry.path().filename() != "report.json") continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(read_text_file(entry.path()));
            } catch (const std::exception&) {
                continue;
            }
            if (j.value("schema", "") != "report/1") continue;
            for (const auto& r : j.at("per_eps")) {
                std::ostringstream os;
                os << format_double(r.at("eps").get<double>()) << ',' << r.at("n").get<int>()
                   << ',' << r.at("k").get<int>() << ','
                   << format_double(r.at("sup_deviation").get<double>()) << ','
                   << format_double(r.at("max_ratio").get<double>()) << ','
                   << format_double(r.at("min_ratio").get<double>()) << ','
                   << format_double(r.at("gh_estimate").get<double>()) << ','
                   << format_double(r.at("df_budget").get<double>()) << ','
                   << format_double(r.at("dgh_budget").get<double>()) << ','
                   << r.at("seed").get<std::uint64_t>() << ','
                   << format_double(r.at("wall_ms").get<double>());
                rows.emplace_back(r.at("eps").get<double>(), os.str());
            }
        }
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        std::ostringstream os;
        os << "eps,N,K,sup_dev,max_ratio,min_ratio,gh_est,dF_budget,dGH_budget,seed,wall_ms\n";
        for (const auto& [eps, row] : rows) os << row << '\n';
        const auto dir = artifact_dir(out, stamp);
        write_text_file(dir / "combined.csv", os.str());
        std::cout << "report: " << rows.size() << " rows -> " << (dir / "combined.csv").string()
                  << "\n";
        return 0;
    }
    return 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    try {
        return dispatch(argc, argv);
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const ConstructionError& e) {
        std::cerr << "construction error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace flatlab
