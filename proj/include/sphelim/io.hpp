#pragma once

// Serialization: JSON for data and reports, CSV rows, flat key-value configs.
// Exact values are written as "num/den" strings, floats with 17 significant
// digits.

#include "sphelim/limits.hpp"
#include "sphelim/rootdata.hpp"
#include "sphelim/sphere.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphelim {

using json = nlohmann::json;

inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string type_name(const RootSystemType& psi)
{
    return std::string(1, to_char(psi.label)) + "_" + std::to_string(psi.rank);
}

inline json datum_to_json(const SpaceDatum& s)
{
    const FamilyInfo& info = family_info(s.family);
    json j;
    j["family"] = std::string(info.key);
    j["row"] = std::string(info.row);
    if (info.grassmannian) {
        j["p"] = s.p;
        j["q"] = s.q_or_n;
    } else {
        j["n"] = s.q_or_n;
    }
    j["type"] = type_name(s.psi);
    j["rank"] = s.rank();
    j["mult_middle"] = s.mult_middle;
    j["mult_alpha1"] = s.mult_alpha1;
    j["mult_half"] = s.mult_half;
    j["a"] = to_string(s.a);
    j["b"] = to_string(s.b);
    j["d"] = s.d ? json(*s.d) : json(nullptr);
    return j;
}

/// Rebuilds the datum from its family and parameters and checks every
/// stored column against the rebuilt value.
inline SpaceDatum datum_from_json(const json& j)
{
    const Family family = parse_family(j.at("family").get<std::string>());
    SpaceDatum s = is_grassmannian(family) ? build_space(family, j.at("p").get<int>(), j.at("q").get<int>())
                                           : build_space(family, 0, j.at("n").get<int>());
    const json fresh = datum_to_json(s);
    for (const auto& [key, value] : j.items()) {
        if (fresh.contains(key) && fresh.at(key) != value) {
            throw std::invalid_argument("datum field '" + key + "' is " + value.dump() + ", expected " +
                                        fresh.at(key).dump());
        }
    }
    return s;
}

/// Every catalog row with its symbolic multiplicity columns and a concrete
/// instance at the requested rank (Grassmannians: p = rank, q = p + q_minus_p).
inline json catalog_json(int rank = 4, int q_minus_p = 1)
{
    auto row_json = [&](const FamilyInfo& info, const SpaceDatum& instance) {
        json r;
        r["row"] = std::string(info.row);
        r["family"] = std::string(info.key);
        r["group"] = std::string(info.group);
        r["subgroup"] = std::string(info.subgroup);
        r["type"] = std::string(1, to_char(info.type));
        r["rank"] = std::string(info.rank_formula);
        r["mult_middle"] = std::string(info.mult_middle);
        r["mult_alpha1"] = std::string(info.mult_alpha1);
        r["mult_half"] = std::string(info.mult_half);
        r["grassmannian"] = info.grassmannian;
        r["d"] = info.grassmannian ? json(info.d) : json(nullptr);
        r["instance"] = datum_to_json(instance);
        return r;
    };
    json out;
    out["rows"] = json::array();
    for (Family f : catalog_families()) {
        const FamilyInfo& info = family_info(f);
        const int r = std::max(rank, detail::min_rank(info.type));
        out["rows"].push_back(row_json(info, build_at_rank(f, r, q_minus_p)));
    }
    out["aliases"] = json::array();
    out["aliases"].push_back(
        row_json(family_info(Family::RankOneReal), build_at_rank(Family::RankOneReal, 1, q_minus_p)));
    return out;
}

/// Parses catalog_json output back into data.
inline std::vector<SpaceDatum> catalog_from_json(const json& j)
{
    std::vector<SpaceDatum> out;
    for (const char* section : {"rows", "aliases"}) {
        if (!j.contains(section)) {
            continue;
        }
        for (const auto& row : j.at(section)) {
            out.push_back(datum_from_json(row.at("instance")));
        }
    }
    return out;
}

inline json certificate_to_json(const DivergenceCertificate& c)
{
    json j;
    j["level"] = c.level;
    j["witness_range"] = {c.first_witness, c.last_witness};
    j["rho_slope"] = to_string(c.slope);
    j["rho_offset"] = to_string(c.offset);
    j["y"] = to_string(c.y);
    j["epsilon"] = to_string(c.epsilon);
    j["delta"] = to_string(c.delta);
    j["L"] = c.L;
    j["N"] = c.N;
    j["bound"] = to_string(c.bound);
    j["bound_float"] = to_double(c.bound);
    j["hypotheses_hold"] = c.hypotheses_hold;
    j["dominates"] = c.dominates;
    j["schedule"] = c.schedule ? json(*c.schedule) : json(nullptr);
    if (!c.note.empty()) {
        j["note"] = c.note;
    }
    return j;
}

inline json report_to_json(const ConvergenceReport& r)
{
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json j;
    j["verdict"] = std::string(to_string(r.verdict));
    j["limit_estimate"] = opt(r.limit_estimate);
    j["last_value"] = opt(r.last_value);
    j["last_level"] = r.last_level;
    j["levels_used"] = r.levels_used;
    j["last_delta"] = opt(r.last_delta);
    j["certificate"] = r.certificate ? certificate_to_json(*r.certificate) : json(nullptr);
    j["reason"] = r.reason;
    return j;
}

inline json mc_to_json(const McResult& r)
{
    json j;
    j["estimate"] = r.estimate;
    j["std_error"] = r.std_error;
    j["target"] = r.target;
    j["z"] = r.z;
    j["samples"] = r.samples;
    return j;
}

inline std::string csv_header_sequence() { return "level,c_num,c_den,c_float\n"; }

inline std::string csv_sequence(const CSequence& seq)
{
    std::string out = csv_header_sequence();
    for (const auto& e : seq.entries) {
        out += std::to_string(e.level) + "," + e.value.get_num().get_str() + "," + e.value.get_den().get_str() + "," +
               format_double(to_double(e.value)) + "\n";
    }
    return out;
}

/// Flat "key = value" file; '#' starts a comment, blank lines are ignored.
using KeyValues = std::map<std::string, std::string>;

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline KeyValues parse_key_values(std::istream& in)
{
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(std::string_view(t).substr(0, eq));
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        }
        std::replace(key.begin(), key.end(), '-', '_');
        kv[key] = trim(std::string_view(t).substr(eq + 1));
    }
    return kv;
}

inline KeyValues read_key_values(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config '" + path + "'");
    }
    return parse_key_values(in);
}

/// "1,0,2", "1 0 2" or "(1, 0, 2)".
inline std::vector<std::int64_t> parse_int_list(std::string_view text)
{
    std::string s;
    for (char c : text) {
        s += (c == ',' || c == '(' || c == ')' || c == '[' || c == ']') ? ' ' : c;
    }
    std::istringstream in(s);
    std::vector<std::int64_t> out;
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) {
            throw std::invalid_argument("not an integer: '" + tok + "'");
        }
        out.push_back(v);
    }
    return out;
}

/// "a..b" (inclusive, optional ":step") or an explicit list "2,3,5".
/// An empty or reversed range yields an empty list.
inline std::vector<int> parse_levels(std::string_view text)
{
    const std::string s = trim(text);
    std::vector<int> out;
    if (const auto dots = s.find(".."); dots != std::string::npos) {
        std::string rest = s.substr(dots + 2);
        int step = 1;
        if (const auto colon = rest.find(':'); colon != std::string::npos) {
            step = std::stoi(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        if (step < 1) {
            throw std::invalid_argument("level step must be positive");
        }
        const int lo = std::stoi(s.substr(0, dots));
        const int hi = std::stoi(rest);
        for (int l = lo; l <= hi; l += step) {
            out.push_back(l);
        }
        return out;
    }
    for (auto v : parse_int_list(s)) {
        out.push_back(static_cast<int>(v));
    }
    return out;
}

inline void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

} // namespace sphelim
