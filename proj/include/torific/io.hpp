#pragma once

#include <torific/cone.hpp>
#include <torific/hahn_series.hpp>
#include <torific/torific_embed.hpp>
#include <torific/tower.hpp>

#include <json.hpp>

#include <cctype>
#include <string>
#include <vector>

namespace torific {

using json = nlohmann::ordered_json;

struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FieldSpec {
    bool is_q = true;
    long long p = 0;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

inline GroupContextPtr parse_group(const json& j)
{
    if (!j.is_object() || !j.contains("weights"))
        throw input_error("group: expected {\"rank\":r,\"weights\":[...]}");
    std::vector<Weight> ws;
    for (const auto& w : j.at("weights")) {
        if (w.contains("rat"))
            ws.push_back(Weight::rational(rat_from_string(w.at("rat").get<std::string>())));
        else if (w.contains("const")) {
            if (w.at("const").get<std::string>() != "pi")
                throw input_error("group: unsupported constant weight");
            ws.push_back(Weight::pi());
        } else
            throw input_error("group: weight needs \"rat\" or \"const\"");
    }
    if (j.contains("rank") && j.at("rank").get<size_t>() != ws.size())
        throw input_error("group: rank does not match the weight count");
    try {
        return GroupContext::create(std::move(ws));
    } catch (const context_error& e) {
        throw input_error(std::string("group: ") + e.what());
    }
}

inline FieldSpec parse_field(const json& j)
{
    FieldSpec f;
    std::string kind = j.value("kind", "Q");
    if (kind == "Q") return f;
    if (kind == "Fp") {
        f.is_q = false;
        f.p = j.at("p").get<long long>();
        if (f.p < 2) throw input_error("field: p must be >= 2");
        return f;
    }
    throw input_error("field: kind must be Q or Fp");
}

inline GroupElement parse_group_element(const json& j, const GroupContextPtr& ctx)
{
    if (!j.is_array() || static_cast<int>(j.size()) != ctx->rank())
        throw input_error("group element: expected a coordinate array of length rank");
    std::vector<long long> coords;
    for (const auto& c : j) coords.push_back(c.get<long long>());
    return GroupElement(ctx, std::move(coords));
}

/// Cutoff literal: coordinate array, or a string like "20", "6pi", "10+3pi".
inline GroupElement parse_cutoff(const json& j, const GroupContextPtr& ctx)
{
    if (j.is_array()) return parse_group_element(j, ctx);
    std::string s = j.is_string() ? j.get<std::string>() : j.dump();
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    long long rat_part = 0, pi_part = 0;
    size_t pos = 0;
    auto read_int = [&]() -> long long {
        size_t start = pos;
        if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) ++pos;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
        if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(t[start]))))
            return 1; // bare "pi"
        return std::stoll(t.substr(start, pos - start));
    };
    while (pos < t.size()) {
        long long v = read_int();
        if (t.compare(pos, 2, "pi") == 0) {
            pi_part += v;
            pos += 2;
        } else {
            rat_part += v;
        }
        if (pos < t.size() && t[pos] == '+') ++pos;
    }
    std::vector<long long> coords(ctx->rank(), 0);
    int rat_idx = -1, pi_idx = -1;
    for (int i = 0; i < ctx->rank(); ++i) {
        if (ctx->weights()[i].kind == Weight::Kind::Rational)
            rat_idx = i;
        else
            pi_idx = i;
    }
    if (rat_part != 0) {
        if (rat_idx < 0) throw input_error("cutoff: group has no rational weight");
        coords[rat_idx] = rat_part;
    }
    if (pi_part != 0) {
        if (pi_idx < 0) throw input_error("cutoff: group has no pi weight");
        coords[pi_idx] = pi_part;
    }
    GroupElement e(ctx, std::move(coords));
    if (!is_positive(e)) throw input_error("cutoff: must be a positive group element");
    return e;
}

inline Rat parse_coeff(const std::string& s, const FieldSpec&, Rat*)
{
    return rat_from_string(s);
}
inline Fp parse_coeff(const std::string& s, const FieldSpec& f, Fp*)
{
    return Fp(std::stoll(s), f.p);
}

template <class K>
HahnSeries<K> parse_series(const json& j, const GroupContextPtr& ctx, const FieldSpec& f)
{
    if (!j.contains("terms") || !j.contains("cutoff"))
        throw input_error("series: expected {\"terms\":[...],\"cutoff\":...}");
    std::vector<std::pair<GroupElement, K>> terms;
    for (const auto& t : j.at("terms")) {
        if (!t.is_array() || t.size() != 2) throw input_error("series: term must be [coeff, exp]");
        K c = parse_coeff(t.at(0).get<std::string>(), f, static_cast<K*>(nullptr));
        terms.emplace_back(parse_group_element(t.at(1), ctx), c);
    }
    return HahnSeries<K>(ctx, std::move(terms), parse_cutoff(j.at("cutoff"), ctx));
}

template <class K>
Polynomial<K> parse_polynomial(const json& j, size_t nvars, const FieldSpec& f)
{
    Polynomial<K> p(static_cast<int>(nvars));
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 2)
            throw input_error("polynomial: term must be [coeff, exponents]");
        K c = parse_coeff(t.at(0).get<std::string>(), f, static_cast<K*>(nullptr));
        std::vector<long long> e;
        for (const auto& x : t.at(1)) e.push_back(x.get<long long>());
        if (e.size() != nvars) throw input_error("polynomial: exponent arity mismatch");
        p.add_term(e, c);
    }
    return p;
}

template <class K>
TorificPresentation<K> parse_presentation(const json& j, const GroupContextPtr& ctx,
                                          const FieldSpec& f)
{
    TorificPresentation<K> p;
    p.ctx = ctx;
    for (const auto& g : j.at("gamma")) p.gamma.push_back(parse_group_element(g, ctx));
    size_t b = p.gamma.size();
    for (const auto& r : j.at("relations")) {
        TorificRelation<K> rel{{}, {}, K{}, Polynomial<K>(static_cast<int>(b))};
        for (const auto& x : r.at("m")) rel.m.push_back(x.get<long long>());
        for (const auto& x : r.at("n")) rel.n.push_back(x.get<long long>());
        rel.lambda = parse_coeff(r.at("lambda").get<std::string>(), f, static_cast<K*>(nullptr));
        if (r.contains("tail")) rel.tail = parse_polynomial<K>(r.at("tail"), b, f);
        p.relations.push_back(std::move(rel));
    }
    return p;
}

inline Fan parse_fan(const json& j)
{
    Fan f;
    f.b = j.at("b").get<size_t>();
    for (const auto& c : j.at("cones")) {
        IMat rays;
        for (const auto& r : c) {
            IVec row;
            for (const auto& x : r) row.push_back(Int(x.get<long long>()));
            rays.push_back(std::move(row));
        }
        f.maximal.push_back(Cone::from_rays(std::move(rays), f.b));
    }
    return f;
}

inline std::vector<PuiseuxTerm> parse_puiseux(const json& j)
{
    std::vector<PuiseuxTerm> terms;
    for (const auto& t : j.at("terms")) {
        if (!t.is_array() || t.size() != 2)
            throw input_error("tower: term must be [exponent, coeff]");
        terms.push_back({rat_from_string(t.at(0).get<std::string>()),
                         rat_from_string(t.at(1).get<std::string>())});
    }
    return terms;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline json group_element_json(const GroupElement& e)
{
    json a = json::array();
    for (long long c : e.coords()) a.push_back(c);
    return a;
}

inline json valuation_json(const Valuation& v)
{
    if (v.is_infinity()) return "INFINITY";
    return group_element_json(*v.value);
}

template <class K>
json series_json(const HahnSeries<K>& s)
{
    json terms = json::array();
    for (const auto& [e, c] : s.terms()) terms.push_back(json::array({coeff_str(c), group_element_json(e)}));
    return json{{"terms", terms}, {"cutoff", group_element_json(s.cutoff())}};
}

inline json imat_json(const IMat& m)
{
    json rows = json::array();
    for (const auto& r : m) {
        json row = json::array();
        for (const auto& x : r) row.push_back(x.str());
        rows.push_back(row);
    }
    return rows;
}

template <class K>
json polynomial_json(const Polynomial<K>& p)
{
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) {
        json exp = json::array();
        for (long long x : e) exp.push_back(x);
        terms.push_back(json::array({coeff_str(c), exp}));
    }
    return terms;
}

inline json fan_json(const Fan& f)
{
    json cones = json::array();
    for (const auto& c : f.maximal) cones.push_back(imat_json(c.rays));
    return json{{"b", f.b}, {"cones", cones}};
}

} // namespace torific
