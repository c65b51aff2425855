#pragma once

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "nforge/triangular.hpp"

namespace nforge {

using Json = nlohmann::ordered_json;

// FNV-1a, hex: embedded into every report for reproducibility
inline std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

// ---------------------------------------------------------------------------
// parsing, with JSON-pointer paths in schema errors
// ---------------------------------------------------------------------------

namespace detail_io {

inline const Json& need(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        throw InvalidInput("schema: missing field " + path + "/" + key);
    return j.at(key);
}

inline std::int64_t need_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw InvalidInput("schema: expected integer at " + path);
    return j.get<std::int64_t>();
}

inline Exponents int_list(const Json& j, const std::string& path) {
    if (!j.is_array()) throw InvalidInput("schema: expected array at " + path);
    Exponents out;
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(need_int(j[i], path + "/" + std::to_string(i)));
    return out;
}

// scalar literal: "a", "a/b", "z^k", "-z^k", "a/b*z^k", or an integer (zeta
// exponent), or [num, den]
inline Cyc parse_scalar(const Json& j, std::int64_t n, const std::string& path) {
    if (j.is_number_integer()) return Cyc::zeta_pow(n, j.get<std::int64_t>());
    if (j.is_array()) {
        if (j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
            throw InvalidInput("schema: expected [num, den] at " + path);
        std::int64_t den = j[1].get<std::int64_t>();
        if (den == 0) throw InvalidInput("schema: zero denominator at " + path);
        return Cyc::from_rational(n, Rational(j[0].get<std::int64_t>(), den));
    }
    if (!j.is_string()) throw InvalidInput("schema: expected scalar at " + path);
    std::string s = j.get<std::string>();
    // strip spaces
    std::string t;
    for (char c : s)
        if (c != ' ') t.push_back(c);
    bool neg = false;
    size_t pos = 0;
    if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) neg = t[pos++] == '-';
    Rational coeff(1);
    std::int64_t zexp = 0;
    auto parse_rat = [&](size_t& p) {
        size_t start = p;
        while (p < t.size() && (std::isdigit(t[p]) || t[p] == '/')) ++p;
        if (p == start) throw InvalidInput("schema: bad scalar literal at " + path);
        return Rational(t.substr(start, p - start));
    };
    if (pos < t.size() && std::isdigit(t[pos])) {
        coeff = parse_rat(pos);
        if (pos < t.size() && t[pos] == '*') ++pos;
    }
    if (pos < t.size() && t[pos] == 'z') {
        ++pos;
        std::int64_t e = 1;
        if (pos < t.size() && t[pos] == '^') {
            ++pos;
            bool eneg = false;
            if (pos < t.size() && t[pos] == '-') {
                eneg = true;
                ++pos;
            }
            size_t start = pos;
            while (pos < t.size() && std::isdigit(t[pos])) ++pos;
            if (start == pos) throw InvalidInput("schema: bad exponent at " + path);
            e = std::stoll(t.substr(start, pos - start));
            if (eneg) e = -e;
        }
        zexp = e;
    }
    if (pos != t.size()) throw InvalidInput("schema: trailing characters at " + path);
    coeff.canonicalize();
    if (neg) coeff = -coeff;
    return Cyc::zeta_pow(n, zexp) * coeff;
}

} // namespace detail_io

inline DoubleDatum parse_double_datum(const Json& j) {
    using namespace detail_io;
    DoubleDatum d;
    std::int64_t n = need_int(need(j, "cyclotomic_order", ""), "/cyclotomic_order");
    if (n < 1) throw InvalidInput("schema: /cyclotomic_order must be >= 1");
    d.f_group.orders = int_list(need(j, "F", ""), "/F");
    d.g_group.orders = int_list(need(j, "G", ""), "/G");
    d.tau0.left = d.f_group;
    d.tau0.right = d.g_group;
    d.tau0.root_order = n;
    const Json& te = need(j, "tau0_exponents", "");
    if (!te.is_array() || te.size() != d.f_group.rank())
        throw InvalidInput("schema: /tau0_exponents must have " +
                           std::to_string(d.f_group.rank()) + " rows");
    for (size_t r = 0; r < te.size(); ++r) {
        Exponents row = int_list(te[r], "/tau0_exponents/" + std::to_string(r));
        if (row.size() != d.g_group.rank())
            throw InvalidInput("schema: /tau0_exponents/" + std::to_string(r) + " must have " +
                               std::to_string(d.g_group.rank()) + " columns");
        d.tau0.exponents.push_back(std::move(row));
    }
    const Json& idx = need(j, "index", "");
    if (!idx.is_array() || idx.empty())
        throw InvalidInput("schema: /index must be a nonempty array");
    for (size_t i = 0; i < idx.size(); ++i) {
        std::string p = "/index/" + std::to_string(i);
        DoubleDatum::IndexPair pair;
        pair.f = d.f_group.reduce(int_list(need(idx[i], "f", p), p + "/f"));
        pair.g = d.g_group.reduce(int_list(need(idx[i], "g", p), p + "/g"));
        if (pair.f.size() != d.f_group.rank() || pair.g.size() != d.g_group.rank())
            throw InvalidInput("schema: " + p + " has wrong rank");
        d.index.push_back(std::move(pair));
    }
    d.max_degree = j.contains("max_degree")
                       ? static_cast<int>(need_int(j.at("max_degree"), "/max_degree"))
                       : config().default_max_degree;
    try {
        d.validate();
        d.tau0.validate();
    } catch (const InvalidInput& e) {
        throw InvalidInput(std::string("schema: ") + e.what());
    }
    return d;
}

inline Json serialize_double_datum(const DoubleDatum& d) {
    Json j;
    j["cyclotomic_order"] = d.root_order();
    j["F"] = d.f_group.orders;
    j["G"] = d.g_group.orders;
    j["tau0_exponents"] = d.tau0.exponents;
    Json idx = Json::array();
    for (const auto& p : d.index) idx.push_back(Json{{"f", p.f}, {"g", p.g}});
    j["index"] = idx;
    j["max_degree"] = d.max_degree;
    return j;
}

inline GelakiDatum parse_gelaki_datum(const Json& j) {
    using namespace detail_io;
    GelakiDatum d;
    d.group.orders = int_list(need(j, "G", ""), "/G");
    std::int64_t n = j.contains("cyclotomic_order")
                         ? need_int(j.at("cyclotomic_order"), "/cyclotomic_order")
                         : std::lcm<std::int64_t>(2, d.group.exponent());
    d.tau0.left = d.tau0.right = d.group;
    d.tau0.root_order = n;
    const Json& te = need(j, "tau0_exponents", "");
    if (!te.is_array() || te.size() != d.group.rank())
        throw InvalidInput("schema: /tau0_exponents must be rank x rank");
    for (size_t r = 0; r < te.size(); ++r) {
        Exponents row = int_list(te[r], "/tau0_exponents/" + std::to_string(r));
        if (row.size() != d.group.rank())
            throw InvalidInput("schema: /tau0_exponents/" + std::to_string(r) +
                               " has wrong width");
        d.tau0.exponents.push_back(std::move(row));
    }
    const Json& cars = need(j, "carriers", "");
    if (!cars.is_array()) throw InvalidInput("schema: /carriers must be an array");
    for (size_t c = 0; c < cars.size(); ++c) {
        std::string p = "/carriers/" + std::to_string(c);
        GelakiDatum::Carrier car;
        car.g = d.group.reduce(int_list(need(cars[c], "g", p), p + "/g"));
        std::int64_t mult = need_int(need(cars[c], "n", p), p + "/n");
        if (mult < 0) throw InvalidInput("schema: " + p + "/n must be >= 0");
        const Json& me = need(cars[c], "M_exponents", p);
        if (!me.is_array() || me.size() != static_cast<size_t>(mult))
            throw InvalidInput("schema: " + p + "/M_exponents must have n rows");
        for (size_t r = 0; r < me.size(); ++r) {
            std::string rp = p + "/M_exponents/" + std::to_string(r);
            if (!me[r].is_array() || me[r].size() != static_cast<size_t>(mult))
                throw InvalidInput("schema: " + rp + " must have n entries");
            std::vector<Cyc> row;
            for (size_t cc = 0; cc < me[r].size(); ++cc)
                row.push_back(parse_scalar(me[r][cc], n, rp + "/" + std::to_string(cc)));
            car.m.push_back(std::move(row));
        }
        d.carriers.push_back(std::move(car));
    }
    try {
        d.tau0.validate();
    } catch (const InvalidInput& e) {
        throw InvalidInput(std::string("schema: ") + e.what());
    }
    return d;
}

inline Json serialize_gelaki_datum(const GelakiDatum& d) {
    Json j;
    j["G"] = d.group.orders;
    j["cyclotomic_order"] = d.root_order();
    j["tau0_exponents"] = d.tau0.exponents;
    Json cars = Json::array();
    for (const auto& car : d.carriers) {
        Json m = Json::array();
        for (const auto& row : car.m) {
            Json r = Json::array();
            for (const auto& c : row) r.push_back(c.str());
            m.push_back(r);
        }
        cars.push_back(Json{{"g", car.g}, {"n", car.m.size()}, {"M_exponents", m}});
    }
    j["carriers"] = cars;
    return j;
}

// thin ideal document: T by generators, Z and zeta by letter assignments
// {"t_generators": [{"f": [...], "g": [...]}], "assignments":
//   [{"v": i, "w": j, "coeff": scalar}]}
inline ThinIdealDatum parse_thin_ideal(const Json& j, const DoubleDatum& d) {
    using namespace detail_io;
    ThinIdealDatum datum;
    GroupSpec fg = d.product_group();
    std::vector<Exponents> tgens;
    const Json& tg = need(j, "t_generators", "");
    if (!tg.is_array()) throw InvalidInput("schema: /t_generators must be an array");
    for (size_t i = 0; i < tg.size(); ++i) {
        std::string p = "/t_generators/" + std::to_string(i);
        Exponents f = int_list(need(tg[i], "f", p), p + "/f");
        Exponents g = int_list(need(tg[i], "g", p), p + "/g");
        if (f.size() != d.f_group.rank() || g.size() != d.g_group.rank())
            throw InvalidInput("schema: " + p + " has wrong rank");
        tgens.push_back(fg.reduce(concat(f, g)));
    }
    datum.t = closure(fg, tgens);
    if (j.contains("assignments")) {
        const Json& as = j.at("assignments");
        if (!as.is_array()) throw InvalidInput("schema: /assignments must be an array");
        for (size_t k = 0; k < as.size(); ++k) {
            std::string p = "/assignments/" + std::to_string(k);
            std::int64_t vi = need_int(need(as[k], "v", p), p + "/v");
            std::int64_t wj = need_int(need(as[k], "w", p), p + "/w");
            if (vi < 0 || wj < 0 || vi >= static_cast<std::int64_t>(d.rank()) ||
                wj >= static_cast<std::int64_t>(d.rank()))
                throw InvalidInput("schema: " + p + " index out of range");
            Cyc coeff = as[k].contains("coeff")
                            ? parse_scalar(as[k].at("coeff"), d.root_order(), p + "/coeff")
                            : Cyc::one(d.root_order());
            std::vector<Cyc> zc(d.rank(), Cyc::zero(d.root_order()));
            std::vector<Cyc> wc(d.rank(), Cyc::zero(d.root_order()));
            zc[vi] = Cyc::one(d.root_order());
            wc[wj] = coeff;
            datum.z_columns.push_back(std::move(zc));
            datum.zeta_columns.push_back(std::move(wc));
        }
    }
    return datum;
}

inline Json serialize_thin_ideal(const ThinIdealDatum& datum) {
    Json j;
    Json tg = Json::array();
    for (const auto& e : datum.t.elements) tg.push_back(e);
    j["t_order"] = datum.t.order();
    j["t_elements"] = tg;
    Json cols = Json::array();
    for (size_t k = 0; k < datum.z_columns.size(); ++k) {
        Json z = Json::array(), w = Json::array();
        for (const auto& c : datum.z_columns[k]) z.push_back(c.str());
        for (const auto& c : datum.zeta_columns[k]) w.push_back(c.str());
        cols.push_back(Json{{"z", z}, {"zeta", w}});
    }
    j["columns"] = cols;
    return j;
}

} // namespace nforge
