#pragma once

#include <torific/monomial_map.hpp>
#include <torific/polynomial.hpp>
#include <torific/pseudo_convergence.hpp>
#include <torific/semigroup.hpp>

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

namespace torific {

struct embed_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One defining relation F = u^m - lambda u^n + tail, where the tail is a
/// polynomial in u_1..u_b all of whose monomials have strictly larger weight
/// than the initial binomial.
template <class K>
struct TorificRelation {
    std::vector<long long> m, n;
    K lambda;
    Polynomial<K> tail;
};

template <class K>
struct TorificPresentation {
    GroupContextPtr ctx;
    std::vector<GroupElement> gamma; // values of u_1..u_b
    std::vector<TorificRelation<K>> relations;

    size_t b() const { return gamma.size(); }
};

template <class K>
GroupElement monomial_weight(const std::vector<GroupElement>& gamma,
                             const std::vector<long long>& e, const K&)
{
    GroupElement acc = GroupElement::zero(gamma.front().context());
    for (size_t i = 0; i < gamma.size(); ++i)
        if (e[i] != 0) acc = acc + e[i] * gamma[i];
    return acc;
}

template <class K>
void validate_presentation(const TorificPresentation<K>& p)
{
    size_t b = p.b();
    if (b == 0) throw embed_error("presentation: no generators");
    for (const auto& g : p.gamma)
        if (!is_positive(g)) throw embed_error("presentation: gamma entries must be positive");
    for (const auto& rel : p.relations) {
        if (rel.m.size() != b || rel.n.size() != b)
            throw embed_error("presentation: relation exponent arity mismatch");
        if (is_zero(rel.lambda)) throw embed_error("presentation: lambda must be nonzero");
        GroupElement wm = monomial_weight(p.gamma, rel.m, rel.lambda);
        GroupElement wn = monomial_weight(p.gamma, rel.n, rel.lambda);
        if (!(wm == wn)) throw embed_error("presentation: initial binomial not weight-homogeneous");
        if (static_cast<size_t>(rel.tail.nvars()) != b)
            throw embed_error("presentation: tail arity mismatch");
        for (const auto& t : rel.tail.terms()) {
            GroupElement wt = monomial_weight(p.gamma, t.first, rel.lambda);
            if (!less(wm, wt))
                throw embed_error("presentation: tail monomial weight not larger than binomial");
        }
    }
}

template <class K>
Polynomial<K> relation_polynomial(const TorificRelation<K>& rel, size_t b)
{
    Polynomial<K> f(static_cast<int>(b));
    f.add_term(rel.m, one_like(rel.lambda));
    f.add_term(rel.n, -rel.lambda);
    return f + rel.tail;
}

/// Substitute u_i = prod_j y_j^{a^j_i}, factor out the componentwise-minimal
/// y-monomial, and normalize the sign so that the largest monomial supported
/// purely on the center variables has coefficient +1.
template <class K>
std::pair<std::vector<long long>, Polynomial<K>> strict_transform(const Polynomial<K>& f,
                                                                  const MonomialMap& m)
{
    if (f.is_zero()) throw embed_error("strict_transform: zero polynomial");
    size_t b = m.rays.size();
    if (static_cast<size_t>(f.nvars()) != b)
        throw embed_error("strict_transform: arity mismatch");
    std::vector<std::pair<std::vector<long long>, K>> mapped;
    std::vector<long long> minexp;
    for (const auto& [e, c] : f.terms()) {
        std::vector<long long> ye(b, 0);
        for (size_t j = 0; j < b; ++j) {
            Int acc = 0;
            for (size_t i = 0; i < b; ++i) acc += m.rays[j][i] * Int(e[i]);
            ye[j] = static_cast<long long>(acc);
        }
        if (minexp.empty())
            minexp = ye;
        else
            for (size_t j = 0; j < b; ++j) minexp[j] = std::min(minexp[j], ye[j]);
        mapped.emplace_back(std::move(ye), c);
    }
    Polynomial<K> g(static_cast<int>(b));
    for (auto& [e, c] : mapped) {
        for (size_t j = 0; j < b; ++j) e[j] -= minexp[j];
        g.add_term(e, c);
    }
    // sign normalization on the center part
    std::vector<char> is_w(b, 0);
    for (size_t j : m.sigma_w_rows) is_w[j] = 1;
    std::optional<std::pair<std::vector<long long>, K>> top;
    auto grlex_less = [](const std::vector<long long>& a, const std::vector<long long>& c) {
        long long da = 0, dc = 0;
        for (long long x : a) da += x;
        for (long long x : c) dc += x;
        if (da != dc) return da < dc;
        return a < c;
    };
    for (const auto& [e, c] : g.terms()) {
        bool pure = true;
        for (size_t j = 0; j < b; ++j)
            if (is_w[j] && e[j] != 0) pure = false;
        if (!pure) continue;
        if (!top || grlex_less(top->first, e)) top = {e, c};
    }
    if (top) g = g.scaled(inverse(top->second));
    return {minexp, g};
}

template <class K>
K eval_poly_at(const Polynomial<K>& f, const std::vector<K>& point, const K& sample)
{
    K acc = zero_like(sample);
    for (const auto& [e, c] : f.terms()) {
        K t = c;
        for (size_t i = 0; i < point.size(); ++i)
            if (e[i] != 0) t = t * field_pow(point[i], e[i]);
        acc = acc + t;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Center coordinates
// ---------------------------------------------------------------------------

namespace detail {

inline std::optional<Rat> field_nth_root(const Rat& a, const Int& n_)
{
    long long n = static_cast<long long>(n_);
    if (n <= 0) throw embed_error("field_nth_root: exponent must be positive");
    Rat r;
    if (exact_nth_root(a, static_cast<unsigned>(n), r)) return r;
    return std::nullopt;
}

} // namespace detail

/// Solve the center system c^{delta_l} = lambda_l over (K*)^{#center}, where
/// delta_l is the center part of A m^l - A n^l. For Q: SNF change of
/// variables plus exact rational roots. For F_p: exhaustive search over the
/// torus, smallest solution in lexicographic order.
template <class K>
std::vector<K> center_coordinates(const TorificPresentation<K>& p, const MonomialMap& m)
{
    size_t b = p.b();
    size_t nc = m.center_rows.size();
    if (nc == 0) return {};
    IMat delta; // rows: relations, cols: center variables
    std::vector<K> lambdas;
    for (const auto& rel : p.relations) {
        IVec row(nc, 0);
        for (size_t k = 0; k < nc; ++k) {
            size_t j = m.center_rows[k];
            Int acc = 0;
            for (size_t i = 0; i < b; ++i) acc += m.rays[j][i] * (Int(rel.m[i]) - Int(rel.n[i]));
            row[k] = acc;
        }
        delta.push_back(std::move(row));
        lambdas.push_back(rel.lambda);
    }

    if constexpr (std::is_same_v<K, Fp>) {
        if (lambdas.empty()) throw embed_error("center_coordinates: no relations");
        long long pmod = lambdas.front().modulus();
        std::vector<long long> cur(nc, 1);
        std::optional<std::vector<K>> best;
        std::function<void(size_t)> rec = [&](size_t k) {
            if (best) return;
            if (k == nc) {
                for (size_t l = 0; l < delta.size(); ++l) {
                    K lhs = Fp(1, pmod);
                    for (size_t j = 0; j < nc; ++j)
                        lhs = lhs * field_pow(Fp(cur[j], pmod),
                                              static_cast<long long>(delta[l][j]));
                    if (!(lhs == lambdas[l])) return;
                }
                std::vector<K> sol;
                for (long long v : cur) sol.emplace_back(Fp(v, pmod));
                best = sol;
                return;
            }
            for (long long v = 1; v < pmod && !best; ++v) {
                cur[k] = v;
                rec(k + 1);
            }
        };
        rec(0);
        if (!best) throw embed_error("center_coordinates: extension required (no solution in F_p)");
        return *best;
    } else {
        auto s = snf(delta);
        size_t rank = s.divisors.size();
        if (rank < nc)
            throw embed_error("center_coordinates: non-isolated solution set (presentation defect)");
        // mu_i = prod_l lambda_l^{U_il}; consistency on zero rows
        std::vector<K> mu;
        for (size_t i = 0; i < delta.size(); ++i) {
            K acc = one_like(lambdas.front());
            for (size_t l = 0; l < delta.size(); ++l)
                if (s.u[i][l] != 0)
                    acc = acc * field_pow(lambdas[l], static_cast<long long>(s.u[i][l]));
            mu.push_back(acc);
        }
        for (size_t i = rank; i < delta.size(); ++i)
            if (!(mu[i] == one_like(lambdas.front())))
                throw embed_error("center_coordinates: inconsistent center system");
        // d_i^{D_ii} = mu_i
        std::vector<K> d(nc, one_like(lambdas.front()));
        for (size_t i = 0; i < rank; ++i) {
            Int n = s.d[i][i];
            auto root = detail::field_nth_root(mu[i], n);
            if (!root)
                throw embed_error("center_coordinates: extension required (no rational root)");
            if (*root == 0) throw embed_error("center_coordinates: center hits the torus boundary");
            d[i] = *root;
        }
        // c_j = prod_k d_k^{V_jk}
        std::vector<K> c(nc, one_like(lambdas.front()));
        for (size_t j = 0; j < nc; ++j) {
            K acc = one_like(lambdas.front());
            for (size_t k = 0; k < nc; ++k)
                if (s.v[j][k] != 0) acc = acc * field_pow(d[k], static_cast<long long>(s.v[j][k]));
            c[j] = acc;
        }
        // verify
        for (size_t l = 0; l < delta.size(); ++l) {
            K lhs = one_like(lambdas.front());
            for (size_t j = 0; j < nc; ++j)
                if (delta[l][j] != 0)
                    lhs = lhs * field_pow(c[j], static_cast<long long>(delta[l][j]));
            if (!(lhs == lambdas[l]))
                throw embed_error("center_coordinates: solution verification failed");
        }
        return c;
    }
}

/// rho_i = prod over center rows j of c_j^{a^j_i}. `one` supplies the field
/// identity (needed when the center is empty).
template <class K>
std::vector<K> rho(const MonomialMap& m, const std::vector<K>& center, const K& one)
{
    if (center.size() != m.center_rows.size()) throw embed_error("rho: center size mismatch");
    size_t b = m.rays.size();
    std::vector<K> out;
    for (size_t i = 0; i < b; ++i) {
        K acc = one;
        for (size_t k = 0; k < center.size(); ++k) {
            size_t j = m.center_rows[k];
            if (m.rays[j][i] != 0)
                acc = acc * field_pow(center[k], static_cast<long long>(m.rays[j][i]));
        }
        out.push_back(acc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Kaplansky embedding, finitely generated case
// ---------------------------------------------------------------------------

template <class K>
struct EmbeddingResult {
    MonomialMap map;
    std::vector<K> center;
    std::vector<K> rho_values;
    std::vector<HahnSeries<K>> xi;    // xi_i(t)
    std::vector<Valuation> residuals; // valuations of F_l(xi(t))
    GroupElement cutoff;
};

template <class K>
EmbeddingResult<K> kaplansky_embed_fg(const TorificPresentation<K>& p, const Fan& fan,
                                      const GroupElement& cutoff, size_t max_newton_steps = 200)
{
    validate_presentation(p);
    size_t b = p.b();
    if (fan.b != b) throw embed_error("kaplansky_embed_fg: fan dimension mismatch");
    const auto& ctx = p.ctx;
    if (!is_positive(cutoff)) throw embed_error("kaplansky_embed_fg: cutoff must be positive");

    // locate sigma_w
    IMat gam_mat;
    for (const auto& g : p.gamma) {
        IVec row;
        for (long long c : g.coords()) row.push_back(c);
        gam_mat.push_back(std::move(row));
    }
    size_t r = b - left_kernel(gam_mat).size();
    WeightVector w{p.gamma};
    Cone sigma_w = find_sigma_w(fan, w, r);

    // a maximal cone containing sigma_w, ray order preserved (it defines the
    // chart's variable labels)
    std::optional<Cone> sigma;
    for (const auto& c : fan.maximal) {
        std::set<IVec> rs(c.rays.begin(), c.rays.end());
        bool all = true;
        for (const auto& sr : sigma_w.rays)
            if (!rs.count(sr)) all = false;
        if (all) {
            sigma = c;
            break;
        }
    }
    if (!sigma) throw embed_error("kaplansky_embed_fg: no maximal cone contains sigma_w");

    K field_one = [&]() -> K {
        if (!p.relations.empty()) return one_like(p.relations.front().lambda);
        if constexpr (std::is_same_v<K, Rat>)
            return Rat(1);
        else
            throw embed_error("kaplansky_embed_fg: F_p presentation needs a relation");
    }();

    EmbeddingResult<K> res;
    res.cutoff = cutoff;
    res.map = monomial_map_from_cone(*sigma, p.gamma);
    if (res.map.sigma_w_rows.size() != r)
        throw embed_error("kaplansky_embed_fg: chart has the wrong number of positive-value "
                          "directions");
    res.center = center_coordinates(p, res.map);
    res.rho_values = rho(res.map, res.center, field_one);

    // strict transforms of all relations
    std::vector<Polynomial<K>> G;
    for (const auto& rel : p.relations)
        G.push_back(strict_transform(relation_polynomial(rel, b), res.map).second);

    size_t nc = res.map.center_rows.size();
    std::vector<HahnSeries<K>> z; // corrections to the center coordinates
    for (size_t k = 0; k < nc; ++k) z.push_back(HahnSeries<K>::zero(ctx, cutoff));

    auto y_images = [&]() {
        std::vector<HahnSeries<K>> ys;
        std::vector<char> is_w(b, 0);
        for (size_t j : res.map.sigma_w_rows) is_w[j] = 1;
        for (size_t j = 0; j < b; ++j) {
            if (is_w[j]) {
                ys.push_back(HahnSeries<K>::monomial(field_one, res.map.y_values[j], cutoff));
            } else {
                size_t k = 0;
                while (res.map.center_rows[k] != j) ++k;
                HahnSeries<K> cj =
                    HahnSeries<K>::monomial(res.center[k], GroupElement::zero(ctx), cutoff);
                ys.push_back(cj + z[k]);
            }
        }
        return ys;
    };

    if (nc > 0) {
        if (G.size() != nc)
            throw embed_error("kaplansky_embed_fg: need as many relations as center variables");
        // frozen Jacobian at y_w = 0, y_center = c
        K sample = p.relations.front().lambda;
        std::vector<K> base_point(b, zero_like(sample));
        for (size_t k = 0; k < nc; ++k) base_point[res.map.center_rows[k]] = res.center[k];
        std::vector<std::vector<K>> J0(nc, std::vector<K>(nc, zero_like(sample)));
        for (size_t l = 0; l < nc; ++l)
            for (size_t k = 0; k < nc; ++k)
                J0[l][k] = eval_poly_at(
                    G[l].derivative(static_cast<int>(res.map.center_rows[k])), base_point, sample);
        // invert J0 once by solving against unit vectors
        std::vector<std::vector<K>> J0inv(nc, std::vector<K>(nc, zero_like(sample)));
        for (size_t col = 0; col < nc; ++col) {
            std::vector<K> e(nc, zero_like(sample));
            e[col] = one_like(sample);
            std::vector<K> x = solve_linear(J0, e);
            for (size_t rrow = 0; rrow < nc; ++rrow) J0inv[rrow][col] = x[rrow];
        }

        std::optional<GroupElement> prev_min;
        for (size_t step = 0;; ++step) {
            auto ys = y_images();
            std::vector<HahnSeries<K>> resid;
            bool all_zero = true;
            std::optional<GroupElement> cur_min;
            for (const auto& g : G) {
                HahnSeries<K> rser = substitute(g, ys);
                if (!rser.is_zero()) {
                    all_zero = false;
                    GroupElement v = *rser.valuation().value;
                    if (!cur_min || less(v, *cur_min)) cur_min = v;
                }
                resid.push_back(std::move(rser));
            }
            if (all_zero) break;
            if (step >= max_newton_steps)
                throw embed_error("kaplansky_embed_fg: Newton iteration budget exceeded");
            if (prev_min && !less(*prev_min, *cur_min))
                throw embed_error(
                    "kaplansky_embed_fg: no Newton progress (presentation defect)");
            prev_min = cur_min;
            for (size_t k = 0; k < nc; ++k) {
                HahnSeries<K> upd = HahnSeries<K>::zero(ctx, cutoff);
                for (size_t l = 0; l < nc; ++l)
                    upd = upd + resid[l].scaled(J0inv[k][l]);
                z[k] = z[k] - upd;
            }
        }
    }

    // xi_i = prod_j y_j^{a^j_i}
    auto ys = y_images();
    for (size_t i = 0; i < b; ++i) {
        HahnSeries<K> xi = HahnSeries<K>::monomial(field_one, GroupElement::zero(ctx), cutoff);
        for (size_t j = 0; j < b; ++j)
            if (res.map.rays[j][i] != 0)
                xi = xi * series_pow(ys[j], static_cast<long long>(res.map.rays[j][i]));
        res.xi.push_back(xi);
    }
    for (const auto& rel : p.relations) {
        HahnSeries<K> fval = substitute(relation_polynomial(rel, b), res.xi);
        res.residuals.push_back(fval.valuation());
    }
    return res;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct VerificationReport {
    bool residuals_ok = true;
    bool initial_forms_ok = true;
    bool graded_multiplicative = true;
    bool rho_binomial_ok = true;
    std::vector<std::string> defects;
    bool ok() const
    {
        return residuals_ok && initial_forms_ok && graded_multiplicative && rho_binomial_ok;
    }
};

template <class K>
VerificationReport verify_embedding(const TorificPresentation<K>& p, const EmbeddingResult<K>& e)
{
    VerificationReport rep;
    size_t b = p.b();
    for (size_t l = 0; l < p.relations.size(); ++l) {
        HahnSeries<K> fval = substitute(relation_polynomial(p.relations[l], b), e.xi);
        if (!fval.is_zero()) {
            rep.residuals_ok = false;
            rep.defects.push_back("relation " + std::to_string(l) +
                                  " does not vanish below the cutoff");
        }
    }
    for (size_t i = 0; i < b; ++i) {
        if (e.xi[i].is_zero()) {
            rep.initial_forms_ok = false;
            rep.defects.push_back("xi_" + std::to_string(i + 1) + " vanishes below the cutoff");
            continue;
        }
        auto [c, g] = e.xi[i].initial_form();
        if (!(c == e.rho_values[i]) || !(g == p.gamma[i])) {
            rep.initial_forms_ok = false;
            rep.defects.push_back("xi_" + std::to_string(i + 1) +
                                  " has wrong initial form (rho_i, gamma_i)");
        }
    }
    // graded multiplicativity on seeded random monomials
    std::mt19937 rng(20240913u);
    std::uniform_int_distribution<int> dist(0, 2);
    for (int trial = 0; trial < 50 && rep.initial_forms_ok; ++trial) {
        std::vector<long long> exp(b);
        long long total = 0;
        for (size_t i = 0; i < b; ++i) {
            exp[i] = dist(rng);
            total += exp[i];
        }
        if (total == 0) continue;
        K coeff = one_like(e.rho_values.front());
        GroupElement wexp = GroupElement::zero(p.ctx);
        HahnSeries<K> prod =
            HahnSeries<K>::monomial(one_like(e.rho_values.front()), wexp, e.cutoff);
        for (size_t i = 0; i < b; ++i) {
            if (exp[i] == 0) continue;
            coeff = coeff * field_pow(e.rho_values[i], exp[i]);
            wexp = wexp + exp[i] * p.gamma[i];
            prod = prod * series_pow(e.xi[i], exp[i]);
        }
        if (!less(wexp, prod.cutoff())) continue; // monomial beyond resolution
        if (prod.is_zero()) {
            rep.graded_multiplicative = false;
            rep.defects.push_back("monomial in xi vanishes although its weight is below cutoff");
            continue;
        }
        auto [c, g] = prod.initial_form();
        if (!(g == wexp) || !(c == coeff)) {
            rep.graded_multiplicative = false;
            rep.defects.push_back("initial form of a monomial in xi is not rho^e t^{e.gamma}");
        }
    }
    // rho^m = lambda rho^n
    for (size_t l = 0; l < p.relations.size(); ++l) {
        const auto& rel = p.relations[l];
        K lm = one_like(rel.lambda), ln = rel.lambda;
        for (size_t i = 0; i < b; ++i) {
            if (rel.m[i] != 0) lm = lm * field_pow(e.rho_values[i], rel.m[i]);
            if (rel.n[i] != 0) ln = ln * field_pow(e.rho_values[i], rel.n[i]);
        }
        if (!(lm == ln)) {
            rep.rho_binomial_ok = false;
            rep.defects.push_back("rho^m != lambda rho^n for relation " + std::to_string(l));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Automorphism intertwining
// ---------------------------------------------------------------------------

struct IntertwineReport {
    bool intertwines = true;
    bool support_guard = true;
    std::vector<std::string> defects;
    bool ok() const { return intertwines && support_guard; }
};

/// apply_group_automorphism(u, E1.xi_i) == E2.xi_i below the common cutoff,
/// plus the well-ordering guard: every output exponent differs from some
/// input exponent by an element of the semigroup generated by the positive
/// support exponents of the units.
template <class K>
IntertwineReport automorphism_intertwine_check(const EmbeddingResult<K>& e1,
                                               const EmbeddingResult<K>& e2,
                                               const std::vector<HahnSeries<K>>& generator_units)
{
    IntertwineReport rep;
    if (e1.xi.size() != e2.xi.size()) {
        rep.intertwines = false;
        rep.defects.push_back("embedding sizes differ");
        return rep;
    }
    std::vector<GroupElement> unit_support;
    const auto& ctx = e1.cutoff.context();
    for (const auto& u : generator_units)
        for (const auto& t : u.terms())
            if (is_positive(t.first)) unit_support.push_back(t.first);
    for (size_t i = 0; i < e1.xi.size(); ++i) {
        HahnSeries<K> img = apply_group_automorphism(generator_units, e1.xi[i]);
        GroupElement bound = min_element(img.cutoff(), e2.xi[i].cutoff());
        if (!equal_below(img, e2.xi[i], bound)) {
            rep.intertwines = false;
            rep.defects.push_back("xi_" + std::to_string(i + 1) +
                                  " is not mapped to its counterpart");
        }
        for (const auto& [eo, co] : img.terms()) {
            bool explained = false;
            for (const auto& [ei, ci] : e1.xi[i].terms()) {
                GroupElement diff = eo - ei;
                if (!is_nonnegative(diff)) continue;
                if (diff.is_zero() ||
                    (!unit_support.empty() && membership(unit_support, diff).member)) {
                    explained = true;
                    break;
                }
            }
            if (!explained) {
                rep.support_guard = false;
                rep.defects.push_back("output exponent of xi_" + std::to_string(i + 1) +
                                      " is not input + semigroup element");
            }
        }
    }
    (void)ctx;
    return rep;
}

} // namespace torific
