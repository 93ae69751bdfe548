#include "flatlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "flatlab/errors.hpp"

namespace flatlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void JsonWriter::separator() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (!stack_.empty()) {
        if (stack_.back() == 'O' || stack_.back() == 'A') out_ += ',';
        if (stack_.back() == 'o') stack_.back() = 'O';
        if (stack_.back() == 'a') stack_.back() = 'A';
    }
}

JsonWriter& JsonWriter::begin_object() {
    separator();
    out_ += '{';
    stack_ += 'o';
    return *this;
}
JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    stack_.pop_back();
    return *this;
}
JsonWriter& JsonWriter::begin_array() {
    separator();
    out_ += '[';
    stack_ += 'a';
    return *this;
}
JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    stack_.pop_back();
    return *this;
}
JsonWriter& JsonWriter::key(const std::string& name) {
    separator();
    out_ += '"';
    out_ += name;
    out_ += "\":";
    after_key_ = true;
    return *this;
}
JsonWriter& JsonWriter::value(double v) {
    separator();
    out_ += format_double(v);
    return *this;
}
JsonWriter& JsonWriter::value(int v) {
    separator();
    out_ += std::to_string(v);
    return *this;
}
JsonWriter& JsonWriter::value(long long v) {
    separator();
    out_ += std::to_string(v);
    return *this;
}
JsonWriter& JsonWriter::value(std::uint64_t v) {
    separator();
    out_ += std::to_string(v);
    return *this;
}
JsonWriter& JsonWriter::value(bool v) {
    separator();
    out_ += v ? "true" : "false";
    return *this;
}
JsonWriter& JsonWriter::value(const std::string& v) {
    separator();
    out_ += '"';
    for (char c : v) {
        switch (c) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            default: out_ += c;
        }
    }
    out_ += '"';
    return *this;
}

namespace {

using nlohmann::json;

json parse_with_schema(const std::string& text, const std::string& expected) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("malformed JSON artifact: ") + e.what());
    }
    if (!j.contains("schema") || !j["schema"].is_string())
        throw ValidationError("artifact is missing its schema field");
    if (j["schema"].get<std::string>() != expected)
        throw ValidationError("schema-version mismatch: expected " + expected + ", got " +
                              j["schema"].get<std::string>());
    return j;
}

void emit_net(JsonWriter& w, const Net& net) {
    w.begin_object();
    w.key("schema").value(std::string("net/1"));
    w.key("m").value(net.m);
    w.key("eps").value(net.eps);
    w.key("seed").value(net.seed);
    w.key("count").value(net.count());
    w.key("centers").begin_array();
    for (const auto& c : net.centers) {
        w.begin_array();
        for (double v : c.x) w.value(v);
        w.end_array();
    }
    w.end_array();
    w.end_object();
}

Net net_from(const json& j) {
    Net net;
    net.m = j.at("m").get<int>();
    net.eps = j.at("eps").get<double>();
    net.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& row : j.at("centers")) {
        Coords c = row.get<Coords>();
        net.centers.push_back(sphere_point(std::move(c)));
    }
    if (j.contains("count") && j["count"].get<int>() != net.count())
        throw ValidationError("net artifact count disagrees with its center list");
    return net;
}

}  // namespace

std::string net_to_json(const Net& net) {
    JsonWriter w;
    emit_net(w, net);
    return w.str();
}

Net net_from_json(const std::string& text) {
    return net_from(parse_with_schema(text, "net/1"));
}

std::string threads_to_json(const ThreadSystem& ts) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string("threads/1"));
    w.key("net");
    emit_net(w, ts.endpoints.net);
    w.key("rho").value(ts.rho);
    w.key("endpoints").begin_array();
    const int n = ts.count();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            w.begin_object();
            w.key("i").value(i);
            w.key("j").value(j);
            w.key("q").begin_array();
            for (double v : ts.endpoints.at(i, j).x) w.value(v);
            w.end_array();
            w.end_object();
        }
    w.end_array();
    w.key("pairs").begin_array();
    for (const auto& t : ts.pairs) {
        w.begin_object();
        w.key("i").value(t.i);
        w.key("j").value(t.j);
        w.key("length").value(t.length);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

ThreadSystem threads_from_json(const std::string& text) {
    const json j = parse_with_schema(text, "threads/1");
    ThreadSystem ts;
    if (!j.contains("net")) throw ValidationError("threads artifact is missing its net");
    if (j["net"].value("schema", "") != "net/1")
        throw ValidationError("threads artifact carries an unexpected net schema");
    ts.endpoints.net = net_from(j["net"]);
    const int n = ts.endpoints.net.count();
    ts.endpoints.points.resize(static_cast<std::size_t>(n) * std::max(n - 1, 0));
    for (const auto& e : j.at("endpoints")) {
        const int i = e.at("i").get<int>(), jj = e.at("j").get<int>();
        if (i < 0 || jj < 0 || i >= n || jj >= n || i == jj)
            throw ValidationError("threads artifact endpoint indices out of range");
        ts.endpoints.points[ts.endpoints.index(i, jj)] = sphere_point(e.at("q").get<Coords>());
    }
    ts.rho = j.at("rho").get<double>();
    for (const auto& t : j.at("pairs")) {
        Thread th;
        th.i = t.at("i").get<int>();
        th.j = t.at("j").get<int>();
        th.length = t.at("length").get<double>();
        if (th.i < 0 || th.j <= th.i || th.j >= n)
            throw ValidationError("threads artifact pair indices out of range");
        ts.pairs.push_back(th);
    }
    return ts;
}

std::string profile_to_json(const TunnelProfile& p) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string("profile/1"));
    w.key("m").value(p.m);
    w.key("rho0").value(p.rho0);
    w.key("rho").value(p.rho);
    w.key("length").value(p.length);
    w.key("l_prime").value(p.l_prime);
    w.key("neck_length").value(p.neck_length);
    w.key("min_radius").value(p.min_radius);
    w.key("samples").begin_array();
    for (const auto& s : p.samples) {
        w.begin_array();
        w.value(s.s).value(s.t).value(s.r).value(s.r1).value(s.r2);
        w.end_array();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

TunnelProfile profile_from_json(const std::string& text) {
    const json j = parse_with_schema(text, "profile/1");
    TunnelProfile p;
    p.m = j.at("m").get<int>();
    p.rho0 = j.at("rho0").get<double>();
    p.rho = j.at("rho").get<double>();
    p.length = j.at("length").get<double>();
    p.l_prime = j.at("l_prime").get<double>();
    p.neck_length = j.at("neck_length").get<double>();
    p.min_radius = j.at("min_radius").get<double>();
    for (const auto& row : j.at("samples")) {
        if (row.size() != 5) throw ValidationError("profile sample rows need 5 entries");
        p.samples.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>(),
                             row[3].get<double>(), row[4].get<double>()});
    }
    if (p.samples.size() < 2) throw ValidationError("profile artifact has no samples");
    return p;
}

namespace {

void emit_budget(JsonWriter& w, const FillingBudget& b) {
    w.begin_object();
    w.key("rho").value(b.rho);
    w.key("rho0").value(b.rho0);
    w.key("length").value(b.L);
    w.key("diam").value(b.diam);
    w.key("vol").value(b.vol);
    w.key("h").value(b.h);
    w.key("h0").value(b.h0);
    w.key("pipe_vol").value(b.pipe_vol);
    w.key("slice_vol").value(b.slice_vol);
    w.key("vol_bottom").value(b.vol_bottom);
    w.key("vol_mid").value(b.vol_mid);
    w.key("vol_top").value(b.vol_top);
    w.key("df_bound").value(b.dF_bound);
    w.key("dgh_bound").value(b.dGH_bound);
    w.end_object();
}

}  // namespace

std::string budget_to_json(const IteratedBudget& budget) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string("budget/1"));
    w.key("eps").value(budget.eps);
    w.key("count").value(budget.count);
    w.key("k").value(budget.thread_count);
    w.key("per_step").begin_array();
    for (const auto& b : budget.per_step) emit_budget(w, b);
    w.end_array();
    w.key("total_df").value(budget.total_dF);
    w.key("total_dgh").value(budget.total_dGH);
    w.key("fitted_constants")
        .begin_object()
        .key("c1")
        .value(budget.fitted_c1)
        .key("c2")
        .value(budget.fitted_c2)
        .key("c3")
        .value(budget.fitted_c3)
        .end_object();
    w.end_object();
    return w.str();
}

std::string single_budget_to_json(const FillingBudget& budget) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string("budget/1"));
    w.key("eps").value(0.0);
    w.key("count").value(0);
    w.key("k").value(1);
    w.key("per_step").begin_array();
    emit_budget(w, budget);
    w.end_array();
    w.key("total_df").value(budget.dF_bound);
    w.key("total_dgh").value(budget.dGH_bound);
    w.key("fitted_constants")
        .begin_object()
        .key("c1")
        .value(budget.slice_vol / std::pow(budget.rho, 1))
        .key("c2")
        .value(0.0)
        .key("c3")
        .value(budget.dF_bound / budget.rho)
        .end_object();
    w.end_object();
    return w.str();
}

std::string report_to_json(const ConvergenceReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string("report/1"));
    w.key("m").value(report.config.m);
    w.key("sample_size").value(static_cast<long long>(report.config.sample_size));
    w.key("rho0_factor").value(report.config.rho0_factor);
    w.key("schedule").begin_array();
    for (double e : report.config.schedule) w.value(e);
    w.end_array();
    w.key("per_eps").begin_array();
    for (const auto& r : report.per_eps) {
        w.begin_object();
        w.key("eps").value(r.eps);
        w.key("n").value(r.n);
        w.key("k").value(r.k);
        w.key("sup_deviation").value(r.sup_deviation);
        w.key("max_ratio").value(r.max_ratio);
        w.key("min_ratio").value(r.min_ratio);
        w.key("near_diag_max_ratio").value(r.near_diag_max_ratio);
        w.key("twelve_eps_ok").value(r.twelve_eps_ok);
        w.key("lambda_ok").value(r.lambda_ok);
        w.key("small_angle_ok").value(r.small_angle_ok);
        w.key("gh_estimate").value(r.gh_estimate);
        w.key("df_budget").value(r.dF_budget);
        w.key("dgh_budget").value(r.dGH_budget);
        w.key("sample_size").value(static_cast<long long>(r.sample_size));
        w.key("skipped_pairs").value(static_cast<long long>(r.skipped_pairs));
        w.key("seed").value(r.seed);
        w.key("wall_ms").value(r.wall_ms);
        w.key("ok").value(r.ok);
        w.key("error").value(r.error);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

std::string report_to_csv(const ConvergenceReport& report) {
    std::ostringstream os;
    os << "eps,N,K,sup_dev,max_ratio,min_ratio,gh_est,dF_budget,dGH_budget,seed,wall_ms\n";
    for (const auto& r : report.per_eps) {
        os << format_double(r.eps) << ',' << r.n << ',' << r.k << ','
           << format_double(r.sup_deviation) << ',' << format_double(r.max_ratio) << ','
           << format_double(r.min_ratio) << ',' << format_double(r.gh_estimate) << ','
           << format_double(r.dF_budget) << ',' << format_double(r.dGH_budget) << ',' << r.seed
           << ',' << format_double(r.wall_ms) << '\n';
    }
    return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot open for writing: " + path.string());
    os << text;
    if (!os) throw ValidationError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace flatlab
