#include <torific/io.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

using namespace torific;

constexpr int EXIT_OK = 0;
constexpr int EXIT_VERIFICATION = 1;
constexpr int EXIT_INPUT = 2;
constexpr int EXIT_RESOURCE = 3;

const char* kExamplePi = R"({
  "group": {"rank": 2, "weights": [{"rat": "1"}, {"const": "pi"}]},
  "field": {"kind": "Q"},
  "gamma": [[2,0],[3,0],[6,1]],
  "relations": [{"m": [3,0,0], "n": [0,2,0], "lambda": "1", "tail": [["1",[0,0,1]]]}],
  "fan": {"b": 3, "cones": [[[2,3,9],[1,2,3],[2,3,10]]]},
  "cutoff": "10+3pi"
})";

const char* kExampleCusp = R"({
  "group": {"rank": 1, "weights": [{"rat": "1"}]},
  "field": {"kind": "Q"},
  "gamma": [[2],[3]],
  "relations": [{"m": [0,2], "n": [3,0], "lambda": "1"}],
  "fan": {"b": 2, "cones": [[[1,0],[1,1]],[[1,1],[2,3]],[[2,3],[1,2]],[[1,2],[0,1]]]},
  "cutoff": "20"
})";

const char* kExampleBranch4613 = R"({
  "group": {"rank": 1, "weights": [{"rat": "1"}]},
  "field": {"kind": "Q"},
  "gamma": [[4],[6],[13]],
  "relations": [
    {"m": [0,2,0], "n": [3,0,0], "lambda": "1", "tail": [["-1",[0,0,1]]]},
    {"m": [5,1,0], "n": [0,0,2], "lambda": "1/4", "tail": [["1/4",[7,0,0]]]}
  ],
  "auto_subdivide": true,
  "cutoff": "30"
})";

const char* kExampleTower = R"({
  "terms": [["3/2","1"],["7/4","1"],["15/8","1"]]
})";

const char* kExampleSemigroupBranch = R"({
  "branch": {
    "x": {"terms": [["1",[4]]], "cutoff": [40]},
    "y": {"terms": [["1",[6]],["1",[7]]], "cutoff": [40]},
    "degree_bound": 8,
    "value_bound": 30
  }
})";

json read_input(const std::string& path, const std::string& example,
                const std::map<std::string, const char*>& builtins)
{
    if (!example.empty()) {
        auto it = builtins.find(example);
        if (it == builtins.end()) throw input_error("unknown --example: " + example);
        return json::parse(it->second);
    }
    if (path.empty()) throw input_error("no input: pass --input FILE or --example NAME");
    std::ifstream in(path);
    if (!in) throw input_error("cannot open input file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw input_error(std::string("JSON parse error: ") + e.what());
    }
    return j;
}

void emit(const json& out, const std::string& output_path)
{
    std::string text = out.dump(2) + "\n";
    if (output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(output_path);
        if (!f) throw input_error("cannot open output file: " + output_path);
        f << text;
    }
}

// ---------------------------------------------------------------------------
// semigroup
// ---------------------------------------------------------------------------

int cmd_semigroup(const json& in, const std::string& output_path)
{
    auto ctx = GroupContext::integers();
    Semigroup sg{ctx, {}};
    json out;
    if (in.contains("branch")) {
        const auto& br = in.at("branch");
        FieldSpec f; // branch oracle runs over Q
        auto x = parse_series<Rat>(br.at("x"), ctx, f);
        auto y = parse_series<Rat>(br.at("y"), ctx, f);
        int deg = br.value("degree_bound", 8);
        long long vb = br.value("value_bound", 30);
        auto values = branch_values_oracle(x, y, deg, vb);
        std::vector<GroupElement> vals;
        json vjson = json::array();
        for (long long v : values) {
            vjson.push_back(v);
            if (v > 0) vals.emplace_back(ctx, std::vector<long long>{v});
        }
        sg = minimal_generators(vals);
        out["values"] = vjson;
    } else if (in.contains("char_exponents")) {
        std::vector<long long> beta;
        for (const auto& b : in.at("char_exponents")) beta.push_back(b.get<long long>());
        sg = branch_semigroup_from_char_exponents(beta);
    } else if (in.contains("generators")) {
        std::vector<GroupElement> gens;
        for (const auto& g : in.at("generators"))
            gens.emplace_back(ctx, std::vector<long long>{g.get<long long>()});
        sg = minimal_generators(gens);
    } else {
        throw input_error("semigroup: need \"branch\", \"char_exponents\" or \"generators\"");
    }
    json gens = json::array();
    for (const auto& g : sg.generators) gens.push_back(g.coords()[0]);
    out["generators"] = gens;
    RelationLattice L = relation_lattice(sg);
    out["relation_lattice"] = imat_json(L.basis);
    json divisors = json::array();
    if (!L.basis.empty())
        for (const auto& d : snf(L.basis).divisors) divisors.push_back(d.str());
    out["snf_divisors"] = divisors;
    out["saturated"] = true; // relation_lattice throws otherwise
    Int g = 0;
    for (const auto& x : sg.generators) g = int_gcd(g, Int(x.coords()[0]));
    if (g == 1) out["frobenius_number"] = frobenius_number(sg);
    emit(out, output_path);
    return EXIT_OK;
}

// ---------------------------------------------------------------------------
// embed
// ---------------------------------------------------------------------------

template <class K>
json embedding_json(const TorificPresentation<K>& p, const EmbeddingResult<K>& e)
{
    json out;
    out["monomial_map"] = imat_json(e.map.rays);
    json yv = json::array();
    for (const auto& v : e.map.y_values) yv.push_back(group_element_json(v));
    out["y_values"] = yv;
    json center = json::array();
    for (const auto& c : e.center) center.push_back(coeff_str(c));
    out["center"] = center;
    json rho = json::array();
    for (const auto& c : e.rho_values) rho.push_back(coeff_str(c));
    out["rho"] = rho;
    json xi = json::array();
    for (const auto& s : e.xi) xi.push_back(series_json(s));
    out["xi"] = xi;
    json resid = json::array();
    for (const auto& v : e.residuals) resid.push_back(valuation_json(v));
    out["residual_valuations"] = resid;
    VerificationReport rep = verify_embedding(p, e);
    out["verification"] = {{"ok", rep.ok()}, {"defects", rep.defects}};
    return out;
}

int cmd_embed_artin_schreier(long long p, const json& cutoff_j, const std::string& output_path)
{
    auto ctx = GroupContext::integers();
    GroupElement cutoff = cutoff_j.is_null() ? GroupElement(ctx, {64}) : parse_cutoff(cutoff_j, ctx);
    Fp one(1, p);
    GroupElement e0 = GroupElement::zero(ctx);
    HahnSeries<Fp> unit = HahnSeries<Fp>::monomial(one, e0, cutoff) -
                          HahnSeries<Fp>::monomial(one, GroupElement(ctx, {p - 1}), cutoff);
    HahnSeries<Fp> inv = series_inv_unit(unit);
    HahnSeries<Fp> x = HahnSeries<Fp>::monomial(one, GroupElement(ctx, {p}), cutoff) * inv;
    HahnSeries<Fp> y = HahnSeries<Fp>::monomial(one, GroupElement(ctx, {p - 1}), cutoff) * inv;
    // y^p - x^{p-1}(1+y)
    HahnSeries<Fp> ones = HahnSeries<Fp>::monomial(one, e0, cutoff);
    HahnSeries<Fp> resid = series_pow(y, p) - series_pow(x, p - 1) * (ones + y);
    json out;
    out["p"] = p;
    out["x"] = series_json(x);
    out["y"] = series_json(y);
    out["residual"] = series_json(resid);
    out["residual_valuation"] = valuation_json(resid.valuation());
    bool ok = resid.is_zero();
    // zeta truncations: partial sums of sum_i t^{1 - 1/p^i} in Z[1/p^K], K=6
    const int K = 6;
    long long pK = 1;
    for (int i = 0; i < K; ++i) pK *= p;
    auto zctx = GroupContext::create({Weight::rational(Rat(1, pK))});
    GroupElement zcut(zctx, {pK}); // threshold 1
    std::vector<HahnSeries<Fp>> partial;
    std::vector<std::pair<GroupElement, Fp>> acc;
    long long q = 1;
    for (int i = 1; i <= K; ++i) {
        q *= p;
        acc.emplace_back(GroupElement(zctx, {pK - pK / q}), one);
        partial.push_back(HahnSeries<Fp>(zctx, acc, zcut));
    }
    auto chk = check_pseudo_convergent(partial);
    json gauges = json::array();
    if (chk.ok())
        for (const auto& g : chk.sequence->gauges) gauges.push_back(group_element_json(g));
    out["zeta_pseudo_convergent"] = chk.ok();
    out["zeta_gauges"] = gauges;
    ok = ok && chk.ok();
    out["ok"] = ok;
    emit(out, output_path);
    return ok ? EXIT_OK : EXIT_VERIFICATION;
}

int cmd_embed(const json& in, const json& cutoff_override, bool auto_subdivide,
              size_t max_stellar_steps, const std::string& output_path)
{
    auto ctx = parse_group(in.at("group"));
    FieldSpec f = parse_field(in.value("field", json{{"kind", "Q"}}));
    if (!f.is_q) throw input_error("embed: F_p presentations not wired into the CLI yet");
    auto p = parse_presentation<Rat>(in, ctx, f);
    json cutoff_j = cutoff_override.is_null() ? in.value("cutoff", json()) : cutoff_override;
    if (cutoff_j.is_null()) throw input_error("embed: missing cutoff");
    GroupElement cutoff = parse_cutoff(cutoff_j, ctx);
    Fan fan;
    if (in.contains("fan") && !(auto_subdivide || in.value("auto_subdivide", false))) {
        fan = parse_fan(in.at("fan"));
    } else {
        Semigroup sg{ctx, p.gamma};
        RelationLattice L = relation_lattice(sg);
        FanConstraints fc;
        fc.hyperplane_normals = L.basis;
        Cone W = weight_cone(L);
        fc.rays = W.rays;
        fan = regular_subdivision(p.b(), fc, max_stellar_steps);
        auto audit = fan_audit(fan, fc);
        if (!audit.ok()) throw embed_error("embed: auto-subdivision failed its own audit");
    }
    EmbeddingResult<Rat> e = kaplansky_embed_fg(p, fan, cutoff);
    json out = embedding_json(p, e);
    emit(out, output_path);
    return out.at("verification").at("ok").get<bool>() ? EXIT_OK : EXIT_VERIFICATION;
}

// ---------------------------------------------------------------------------
// tower
// ---------------------------------------------------------------------------

int cmd_tower(const json& in, int degree_bound, long long value_bound,
              const std::string& output_path)
{
    auto terms = parse_puiseux(in);
    TowerReport rep = approximation_tower(terms, degree_bound, value_bound);
    json out;
    json levels = json::array();
    for (const auto& lvl : rep.levels) {
        json l;
        l["D"] = lvl.D;
        json tr = json::array();
        for (const auto& t : lvl.truncation)
            tr.push_back(json::array({t.exponent.str(), t.coeff.str()}));
        l["truncation"] = tr;
        l["equation"] = polynomial_json(lvl.equation);
        l["gamma"] = lvl.gamma ? json(lvl.gamma->str()) : json("INFINITY");
        l["semigroup"] = lvl.semigroup;
        if (lvl.new_generator) l["new_generator"] = *lvl.new_generator;
        l["theorem_a_ok"] = lvl.theorem_a_ok;
        levels.push_back(std::move(l));
    }
    out["levels"] = levels;
    out["gauges_increasing"] = rep.gauges_increasing;
    out["pc_ok"] = rep.pc_ok;
    out["stabilizes"] = rep.stabilizes;
    out["finitely_generated"] = (rep.levels.size() == 1);
    out["defects"] = rep.defects;
    out["ok"] = rep.ok();
    emit(out, output_path);
    return rep.ok() ? EXIT_OK : EXIT_VERIFICATION;
}

// ---------------------------------------------------------------------------
// fan
// ---------------------------------------------------------------------------

int cmd_fan(const json& in, bool jacobi_perron, size_t steps, size_t max_stellar_steps,
            const std::string& output_path)
{
    json out;
    if (jacobi_perron) {
        auto ctx = parse_group(in.value("group", json::parse(
                                             R"({"rank":2,"weights":[{"rat":"1"},{"const":"pi"}]})")));
        WeightVector w;
        if (in.contains("w"))
            for (const auto& e : in.at("w")) w.entries.push_back(parse_group_element(e, ctx));
        else
            w.entries = {GroupElement(ctx, {1, 0}), GroupElement(ctx, {0, 1})};
        Cone sigma0 = Cone::from_rays({{1, 0}, {0, 1}}, 2);
        if (in.contains("sigma0")) {
            IMat rays;
            for (const auto& r : in.at("sigma0")) {
                IVec row;
                for (const auto& x : r) row.push_back(Int(x.get<long long>()));
                rays.push_back(std::move(row));
            }
            sigma0 = Cone::from_rays(std::move(rays), 2);
        }
        auto cones = jacobi_perron_refine(sigma0, w, steps);
        json cj = json::array();
        for (const auto& c : cones) cj.push_back(imat_json(c.rays));
        out["cones"] = cj;
        out["ok"] = true;
        emit(out, output_path);
        return EXIT_OK;
    }
    size_t b = in.at("b").get<size_t>();
    FanConstraints fc;
    if (in.contains("hyperplanes"))
        for (const auto& h : in.at("hyperplanes")) {
            IVec n;
            for (const auto& x : h) n.push_back(Int(x.get<long long>()));
            fc.hyperplane_normals.push_back(std::move(n));
        }
    if (in.contains("rays"))
        for (const auto& h : in.at("rays")) {
            IVec n;
            for (const auto& x : h) n.push_back(Int(x.get<long long>()));
            fc.rays.push_back(std::move(n));
        }
    Fan fan = regular_subdivision(b, fc, max_stellar_steps);
    auto audit = fan_audit(fan, fc);
    out["fan"] = fan_json(fan);
    out["audit"] = {{"ok", audit.ok()},
                    {"regular", audit.regular},
                    {"faces_compatible", audit.faces_compatible},
                    {"covers_support", audit.covers_support},
                    {"constraints_compatible", audit.constraints_compatible},
                    {"defects", audit.defects}};
    out["ok"] = audit.ok();
    emit(out, output_path);
    return audit.ok() ? EXIT_OK : EXIT_VERIFICATION;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const json& in, const std::string& output_path)
{
    auto ctx = parse_group(in.at("group"));
    FieldSpec f = parse_field(in.value("field", json{{"kind", "Q"}}));
    if (!f.is_q) throw input_error("verify: F_p not wired into the CLI yet");
    auto p = parse_presentation<Rat>(in, ctx, f);
    const auto& ej = in.at("embedding");
    EmbeddingResult<Rat> e;
    for (const auto& s : ej.at("xi")) e.xi.push_back(parse_series<Rat>(s, ctx, f));
    for (const auto& r : ej.at("rho")) e.rho_values.push_back(rat_from_string(r.get<std::string>()));
    if (e.xi.empty()) throw input_error("verify: empty embedding");
    e.cutoff = e.xi.front().cutoff();
    for (const auto& s : e.xi) e.cutoff = min_element(e.cutoff, s.cutoff());
    VerificationReport rep = verify_embedding(p, e);
    json out = {{"ok", rep.ok()}, {"defects", rep.defects}};
    emit(out, output_path);
    return rep.ok() ? EXIT_OK : EXIT_VERIFICATION;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact Hahn-series / value-semigroup / torific-embedding toolkit"};
    app.require_subcommand(1);

    std::string input_path, output_path, example, cutoff_str, field_kind = "Q";
    long long p_mod = 2;
    int degree_bound = 0;
    long long value_bound = 0;
    size_t steps = 5, max_stellar_steps = 512;
    unsigned precision_ceiling = 4096;
    bool auto_subdivide = false, jacobi_perron = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--input", input_path, "input JSON file");
        cmd->add_option("--example", example, "builtin example name");
        cmd->add_option("--output", output_path, "write the report here instead of stdout");
    };
    auto* c_semigroup = app.add_subcommand("semigroup", "value semigroups and relation lattices");
    add_common(c_semigroup);
    auto* c_embed = app.add_subcommand("embed", "Kaplansky embedding pipeline");
    add_common(c_embed);
    c_embed->add_option("--cutoff", cutoff_str, "truncation threshold, e.g. 30 or 10+3pi");
    c_embed->add_option("--field", field_kind, "Q or Fp");
    c_embed->add_option("--p", p_mod, "prime for F_p examples");
    c_embed->add_flag("--auto-subdivide", auto_subdivide, "build the fan by regular subdivision");
    c_embed->add_option("--max-stellar-steps", max_stellar_steps, "stellar subdivision budget");
    c_embed->add_option("--precision-ceiling", precision_ceiling, "bits for certified comparisons");
    auto* c_tower = app.add_subcommand("tower", "rank-one approximation towers");
    add_common(c_tower);
    c_tower->add_option("--degree-bound", degree_bound, "oracle degree bound (0 = auto)");
    c_tower->add_option("--value-bound", value_bound, "oracle value bound (0 = auto)");
    auto* c_fan = app.add_subcommand("fan", "regular subdivision / Jacobi-Perron");
    add_common(c_fan);
    c_fan->add_flag("--jacobi-perron", jacobi_perron, "run Jacobi-Perron refinement");
    c_fan->add_option("--steps", steps, "Jacobi-Perron step count");
    c_fan->add_option("--max-stellar-steps", max_stellar_steps, "stellar subdivision budget");
    auto* c_verify = app.add_subcommand("verify", "verify a stored embedding");
    add_common(c_verify);

    CLI11_PARSE(app, argc, argv);

    const std::map<std::string, const char*> embed_examples = {
        {"pi", kExamplePi}, {"cusp", kExampleCusp}, {"branch4613", kExampleBranch4613}};
    const std::map<std::string, const char*> semigroup_examples = {
        {"branch4613", kExampleSemigroupBranch}};
    const std::map<std::string, const char*> tower_examples = {{"threelevel", kExampleTower}};

    try {
        json cutoff_j;
        if (!cutoff_str.empty()) cutoff_j = cutoff_str;
        if (app.got_subcommand(c_semigroup))
            return cmd_semigroup(read_input(input_path, example, semigroup_examples), output_path);
        if (app.got_subcommand(c_embed)) {
            if (example == "artin-schreier")
                return cmd_embed_artin_schreier(p_mod, cutoff_j, output_path);
            return cmd_embed(read_input(input_path, example, embed_examples), cutoff_j,
                             auto_subdivide, max_stellar_steps, output_path);
        }
        if (app.got_subcommand(c_tower))
            return cmd_tower(read_input(input_path, example, tower_examples), degree_bound,
                             value_bound, output_path);
        if (app.got_subcommand(c_fan)) {
            json j = (jacobi_perron && input_path.empty() && example.empty())
                         ? json::object()
                         : read_input(input_path, example, {});
            return cmd_fan(j, jacobi_perron, steps, max_stellar_steps, output_path);
        }
        if (app.got_subcommand(c_verify))
            return cmd_verify(read_input(input_path, example, {}), output_path);
        throw input_error("no subcommand");
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return EXIT_INPUT;
    } catch (const resource_error& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return EXIT_RESOURCE;
    } catch (const precision_error& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return EXIT_RESOURCE;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return EXIT_INPUT;
    } catch (const std::exception& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return EXIT_VERIFICATION;
    }
}
