#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "symspace/errors.hpp"

namespace symspace::cli {

namespace {

using nlohmann::json;

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    return v;
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<int>();
}

std::uint64_t get_seed(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) throw ConfigError(path, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

std::vector<double> get_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(get_number(j[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

void reject_unknown(const json& j, const std::string& prefix, std::initializer_list<const char*> allowed) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) throw ConfigError(prefix.empty() ? k : prefix + "." + k, "unknown field");
}

void validate_for_suite(RunConfig& c) {
    const auto& s = c.space;
    const std::string& su = c.suite;
    if (su == "geometry-verify" || su == "transference" || su == "kernel-verify") {
        if (s.m2 != 0) throw ConfigError("space", su + " requires m2 = 0");
    }
    if (su == "kernel-verify" && s.m1 > 2) throw ConfigError("space", "kernel-verify supports d = 2 and d = 3");
    if (su == "norm-lab" || su == "transference") {
        if (!(c.p > 1.0 && c.p < 2.0)) throw ConfigError("p", "must lie in (1, 2)");
    }
    if (su == "complex-reduce") {
        if (!c.weyl) c.weyl = WeylData::rank_one();
        if (c.weyl->rank == 1 && (s.m1 != 2 || s.m2 != 0))
            throw ConfigError("space", "the rank-one complex case is (2,0)");
    } else if (c.weyl) {
        throw ConfigError("weyl", "only used by complex-reduce");
    }
    if (c.grids_given) {
        const auto& g = c.grids;
        if (!(g.T_max > 0)) throw ConfigError("grids.T_max", "must be positive");
        if (!(g.Lambda > 0)) throw ConfigError("grids.Lambda", "must be positive");
        if (g.t_points <= 0 || g.t_points % 16) throw ConfigError("grids.t_points", "must be a positive multiple of 16");
        if (g.lambda_points <= 0 || g.lambda_points % 16)
            throw ConfigError("grids.lambda_points", "must be a positive multiple of 16");
    } else if (su == "norm-lab") {
        c.grids = GridConfig{20.0, 640, 20.0, 1280};
    }
    if (c.samples < 0) throw ConfigError("seeds.samples", "must be >= 0");
    if (su == "norm-lab" && c.translates.empty())
        for (int k = 0; k < 10; ++k) c.translates.push_back(k);
}

}  // namespace

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("(root)", "expected a JSON object");
    reject_unknown(j, "", {"suite", "space", "p", "grids", "seeds", "translates", "weyl", "output_dir", "sweep"});
    RunConfig c;

    if (!j.contains("suite") || !j["suite"].is_string()) throw ConfigError("suite", "missing or not a string");
    c.suite = j["suite"].get<std::string>();
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), c.suite) == names.end())
        throw ConfigError("suite", "unknown suite '" + c.suite + "'");

    int m1 = 2, m2 = 0;
    if (j.contains("space")) {
        const auto& sp = j["space"];
        if (sp.is_array()) {
            if (sp.size() != 2) throw ConfigError("space", "expected [m1, m2]");
            m1 = get_int(sp[0], "space[0]");
            m2 = get_int(sp[1], "space[1]");
        } else if (sp.is_object()) {
            reject_unknown(sp, "space", {"m1", "m2"});
            if (sp.contains("m1")) m1 = get_int(sp["m1"], "space.m1");
            if (sp.contains("m2")) m2 = get_int(sp["m2"], "space.m2");
        } else {
            throw ConfigError("space", "expected [m1, m2] or {\"m1\", \"m2\"}");
        }
    }
    try {
        c.space = make_space(m1, m2);
    } catch (const DomainError& e) {
        throw ConfigError("space", e.what());
    }

    if (j.contains("p")) c.p = get_number(j["p"], "p");

    if (j.contains("grids")) {
        const auto& g = j["grids"];
        if (!g.is_object()) throw ConfigError("grids", "expected an object");
        reject_unknown(g, "grids", {"T_max", "t_points", "Lambda", "lambda_points"});
        c.grids_given = true;
        if (g.contains("T_max")) c.grids.T_max = get_number(g["T_max"], "grids.T_max");
        if (g.contains("t_points")) c.grids.t_points = get_int(g["t_points"], "grids.t_points");
        if (g.contains("Lambda")) c.grids.Lambda = get_number(g["Lambda"], "grids.Lambda");
        if (g.contains("lambda_points")) c.grids.lambda_points = get_int(g["lambda_points"], "grids.lambda_points");
    }

    if (j.contains("seeds")) {
        const auto& sd = j["seeds"];
        if (!sd.is_object()) throw ConfigError("seeds", "expected an object");
        reject_unknown(sd, "seeds", {"family", "samples", "count"});
        if (sd.contains("family")) c.family_seed = get_seed(sd["family"], "seeds.family");
        if (sd.contains("samples")) c.sample_seed = get_seed(sd["samples"], "seeds.samples");
        if (sd.contains("count")) c.samples = get_int(sd["count"], "seeds.count");
    }

    if (j.contains("translates")) c.translates = get_list(j["translates"], "translates");
    if (j.contains("weyl")) c.weyl = weyl_from_json(j["weyl"], "weyl");
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) throw ConfigError("output_dir", "expected a string");
        c.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("sweep")) {
        const auto& sw = j["sweep"];
        if (!sw.is_object()) throw ConfigError("sweep", "expected an object of axis -> values");
        reject_unknown(sw, "sweep", {"p", "lambda-scale", "translate"});
        for (const auto& [k, v] : sw.items()) c.sweep[k] = get_list(v, "sweep." + k);
    }

    validate_for_suite(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

json weyl_to_json(const WeylData& wd) {
    json m = json::array();
    for (const auto& s : wd.W) {
        json row = json::array();
        for (int k = 0; k < wd.rank * wd.rank; ++k) row.push_back(s[static_cast<std::size_t>(k)]);
        m.push_back(row);
    }
    json roots = json::array();
    for (const auto& a : wd.positive_roots) {
        json r = json::array();
        for (int k = 0; k < wd.rank; ++k) r.push_back(a[static_cast<std::size_t>(k)]);
        roots.push_back(r);
    }
    return {{"type", wd.type}, {"rank", wd.rank}, {"matrices", m}, {"det", wd.det}, {"positive_roots", roots},
            {"dimension", wd.dimension}};
}

WeylData weyl_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    reject_unknown(j, path, {"type", "rank", "matrices", "det", "positive_roots", "dimension"});
    if (!j.contains("type") || !j["type"].is_string()) throw ConfigError(path + ".type", "expected \"A1\" or \"A2\"");
    const std::string type = j["type"].get<std::string>();
    WeylData wd;
    if (type == "A1")
        wd = WeylData::rank_one();
    else if (type == "A2")
        wd = WeylData::a2();
    else
        throw ConfigError(path + ".type", "expected \"A1\" or \"A2\"");
    if (!j.contains("matrices")) return wd;

    // Explicit data replaces the built-in tables and must describe the same group.
    const int r = wd.rank;
    const auto& m = j["matrices"];
    if (!m.is_array() || m.empty()) throw ConfigError(path + ".matrices", "expected a non-empty array");
    WeylData x;
    x.type = type;
    x.rank = r;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const auto v = get_list(m[k], path + ".matrices[" + std::to_string(k) + "]");
        if (static_cast<int>(v.size()) != r * r)
            throw ConfigError(path + ".matrices[" + std::to_string(k) + "]", "expected " + std::to_string(r * r) + " entries");
        std::array<double, 4> s{};
        std::copy(v.begin(), v.end(), s.begin());
        x.W.push_back(s);
        x.det.push_back(r == 1 ? (s[0] > 0 ? 1 : -1) : (s[0] * s[3] - s[1] * s[2] > 0 ? 1 : -1));
    }
    if (j.contains("det")) {
        const auto d = get_list(j["det"], path + ".det");
        if (d.size() != x.W.size()) throw ConfigError(path + ".det", "one entry per matrix required");
        for (std::size_t k = 0; k < d.size(); ++k)
            if (d[k] != x.det[k]) throw ConfigError(path + ".det[" + std::to_string(k) + "]", "inconsistent with the matrix");
    }
    if (!j.contains("positive_roots")) throw ConfigError(path + ".positive_roots", "required with explicit matrices");
    const auto& pr = j["positive_roots"];
    if (!pr.is_array() || pr.empty()) throw ConfigError(path + ".positive_roots", "expected a non-empty array");
    for (std::size_t k = 0; k < pr.size(); ++k) {
        const auto v = get_list(pr[k], path + ".positive_roots[" + std::to_string(k) + "]");
        if (static_cast<int>(v.size()) != r)
            throw ConfigError(path + ".positive_roots[" + std::to_string(k) + "]", "expected " + std::to_string(r) + " entries");
        AVec a{};
        std::copy(v.begin(), v.end(), a.begin());
        x.positive_roots.push_back(a);
        x.rho[0] += a[0];
        x.rho[1] += a[1];
    }
    x.dimension = r + 2 * static_cast<int>(x.positive_roots.size());
    const WeylCheck chk = check_weyl(x);
    if (!chk.pass) throw ConfigError(path + ".matrices", "not a closed orthogonal group of the expected order");
    return x;
}

}  // namespace symspace::cli
