#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoindex/index_jump.hpp"
#include "geoindex/morse.hpp"

namespace geoindex {

using nlohmann::json;

// A loaded and validated system: manifold tag, geodesics, optional preset
// reference and optional pre-computed jump tuple.
struct SystemConfig {
    std::string manifold = "S4";
    std::string preset;     // e.g. "TCG"; informational label
    bool pinching = true;   // whether pinching predicates are asserted
    System geodesics;
    std::optional<JumpTuple> tuple;
    std::string digest;     // content hash of the canonical serialization
};

namespace detail {

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    static const char* d = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[i] = d[v & 0xf];
    return out;
}

inline Rat json_rat(const json& j, const std::string& what) {
    if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer())
        return Rat(Int(j[0].get<long long>()), Int(j[1].get<long long>()));
    throw ParseError(what + ": expected integer, \"a/b\" string, or [num, den] pair");
}

inline Int json_int(const json& j, const std::string& what) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) return Int(j.get<std::string>());
    throw ParseError(what + ": expected an integer");
}

inline AngleFraction parse_angle(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": angle must be an object");
    if (j.contains("rational")) return AngleFraction::rational(json_rat(j["rational"], where));
    if (j.contains("irrational")) {
        const json& w = j["irrational"];
        if (w.contains("sqrt"))
            return AngleFraction::irrational(IrrationalWitness::sqrt_of(json_rat(w["sqrt"], where)));
        if (w.contains("lo") && w.contains("hi"))
            return AngleFraction::irrational(
                IrrationalWitness::fixed(json_rat(w["lo"], where), json_rat(w["hi"], where)));
        throw ParseError(where + ": irrational angle needs {\"sqrt\":[n,d]} or {\"lo\":..,\"hi\":..}");
    }
    throw ParseError(where + ": angle needs \"rational\" or \"irrational\"");
}

inline json angle_json(const AngleFraction& a) {
    json j;
    if (a.is_rational()) {
        j["rational"] = {rat_num(a.rational_value()).convert_to<long long>(),
                         rat_den(a.rational_value()).convert_to<long long>()};
        return j;
    }
    const auto& d = a.witness()->description();
    if (d.rfind("sqrt(", 0) == 0) {
        Rat v = parse_rat(d.substr(5, d.size() - 6));
        j["irrational"]["sqrt"] = {rat_num(v).convert_to<long long>(), rat_den(v).convert_to<long long>()};
    } else {
        j["irrational"]["lo"] = rat_str(a.witness()->enclosure().lo);
        j["irrational"]["hi"] = rat_str(a.witness()->enclosure().hi);
    }
    return j;
}

inline NormalFormBlock parse_block(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("type")) throw ParseError(where + ": block needs a \"type\"");
    std::string t = j["type"].get<std::string>();
    if (t == "N1") {
        if (!j.contains("eig") || !j.contains("b")) throw ParseError(where + ": N1 needs \"eig\" and \"b\"");
        return NormalFormBlock::n1(j["eig"].get<int>(), j["b"].get<int>());
    }
    if (t == "I2") return NormalFormBlock::i2();
    if (t == "negI2") return NormalFormBlock::neg_i2();
    if (t == "R") return NormalFormBlock::rotation(parse_angle(j.at("angle"), where));
    if (t == "N2")
        return NormalFormBlock::two_four(parse_angle(j.at("angle"), where),
                                         j.value("nontrivial", false));
    if (t == "H") return NormalFormBlock::hyperbolic(j.value("sign", 2));
    throw ParseError(where + ": unknown block type \"" + t + "\"");
}

inline json block_json(const NormalFormBlock& b) {
    json j;
    switch (b.kind) {
        case BlockKind::EigOnePlus: j["type"] = "N1"; j["eig"] = 1; j["b"] = 1; break;
        case BlockKind::EigOneMinus: j["type"] = "N1"; j["eig"] = 1; j["b"] = -1; break;
        case BlockKind::EigNegOnePlus: j["type"] = "N1"; j["eig"] = -1; j["b"] = 1; break;
        case BlockKind::EigNegOneMinus: j["type"] = "N1"; j["eig"] = -1; j["b"] = -1; break;
        case BlockKind::EigOneIdentity: j["type"] = "I2"; break;
        case BlockKind::EigNegOneIdentity: j["type"] = "negI2"; break;
        case BlockKind::Rotation: j["type"] = "R"; j["angle"] = angle_json(*b.angle); break;
        case BlockKind::TwoFour:
            j["type"] = "N2";
            j["angle"] = angle_json(*b.angle);
            j["nontrivial"] = b.nontrivial;
            break;
        case BlockKind::HyperbolicPlus: j["type"] = "H"; j["sign"] = 2; break;
        case BlockKind::HyperbolicMinus: j["type"] = "H"; j["sign"] = -2; break;
    }
    return j;
}

inline JumpTuple parse_tuple(const json& j, size_t n_geodesics) {
    JumpTuple t;
    t.N = json_int(j.at("N"), "tuple.N");
    for (const auto& v : j.at("m")) t.m.push_back(json_int(v, "tuple.m"));
    for (const auto& v : j.at("chi")) t.chi.push_back(v.get<int>());
    t.Mbar = j.contains("Mbar") ? json_int(j["Mbar"], "tuple.Mbar") : Int(1);
    t.M0 = j.contains("M0") ? json_int(j["M0"], "tuple.M0") : Int(3);
    t.eps = j.contains("eps") ? json_rat(j["eps"], "tuple.eps") : pow10_inv(6);
    t.delta = j.contains("delta") ? json_rat(j["delta"], "tuple.delta") : pow10_inv(6);
    t.mbar = j.value("mbar", 4);
    if (t.m.size() != n_geodesics || t.chi.size() != n_geodesics)
        throw ValidationError("tuple arity does not match the geodesic list");
    return t;
}

inline json tuple_json(const JumpTuple& t) {
    json j;
    j["N"] = t.N.str();
    for (const auto& m : t.m) j["m"].push_back(m.str());
    j["chi"] = t.chi;
    j["Mbar"] = t.Mbar.str();
    j["M0"] = t.M0.str();
    j["eps"] = rat_str(t.eps);
    j["delta"] = rat_str(t.delta);
    j["mbar"] = t.mbar;
    return j;
}

}  // namespace detail

inline SystemConfig load_config(const json& j) {
    SystemConfig cfg;
    std::vector<std::string> problems;
    if (!j.is_object()) throw ParseError("config root must be a JSON object");
    cfg.manifold = j.value("manifold", std::string("S4"));
    if (cfg.manifold != "S4")
        problems.push_back("manifold \"" + cfg.manifold + "\" unsupported (only S4)");
    cfg.preset = j.value("preset", std::string());
    cfg.pinching = j.value("pinching", true);
    std::set<std::string> names;
    for (const auto& gj : j.value("geodesics", json::array())) {
        std::string name = gj.value("name", std::string());
        try {
            if (name.empty()) throw ValidationError("geodesic entry without a name");
            if (!names.insert(name).second) throw ValidationError(name + ": duplicate name");
            std::vector<NormalFormBlock> blocks;
            for (const auto& bj : gj.at("blocks")) blocks.push_back(detail::parse_block(bj, name));
            cfg.geodesics.push_back(make_descriptor(
                name, validate(std::move(blocks)),
                detail::json_int(gj.at("initial_index"), name + ".initial_index")));
        } catch (const Error& e) {
            problems.push_back(name.empty() ? e.what() : name + ": " + e.what());
        }
    }
    if (!problems.empty()) {
        std::string msg = "config invalid:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw ValidationError(msg);
    }
    if (j.contains("tuple")) cfg.tuple = detail::parse_tuple(j["tuple"], cfg.geodesics.size());
    cfg.digest = detail::hex64(detail::fnv1a64(j.dump()));
    return cfg;
}

inline json save_config(const SystemConfig& cfg) {
    json j;
    j["manifold"] = cfg.manifold;
    if (!cfg.preset.empty()) j["preset"] = cfg.preset;
    j["pinching"] = cfg.pinching;
    j["geodesics"] = json::array();
    for (const auto& g : cfg.geodesics) {
        json gj;
        gj["name"] = g.name;
        gj["initial_index"] = g.initial_index.str();
        for (const auto& b : g.decomp.blocks) gj["blocks"].push_back(detail::block_json(b));
        j["geodesics"].push_back(gj);
    }
    if (cfg.tuple) j["tuple"] = detail::tuple_json(*cfg.tuple);
    return j;
}

inline SystemConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return load_config(j);
}

// Profile files: array of {"geodesic": name, "m": iterate, "k_plus": [...],
// "k_minus": [...]}.
inline std::map<std::string, LocalHomologyProfile> load_profiles(const json& j) {
    std::map<std::string, LocalHomologyProfile> out;
    if (!j.is_array()) throw ParseError("profiles root must be a JSON array");
    for (const auto& row : j) {
        std::string name = row.at("geodesic").get<std::string>();
        Int m = detail::json_int(row.at("m"), name + ".m");
        LocalHomologyProfile::Row r;
        for (const auto& v : row.at("k_plus")) r.k_plus.push_back(detail::json_int(v, "k_plus"));
        for (const auto& v : row.at("k_minus")) r.k_minus.push_back(detail::json_int(v, "k_minus"));
        if (!out[name].rows.emplace(m, std::move(r)).second)
            throw ValidationError(name + ": duplicate profile row at m=" + m.str());
    }
    return out;
}

inline std::map<std::string, LocalHomologyProfile> load_profiles_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return load_profiles(j);
}

}  // namespace geoindex
