#pragma once

#include <torific/cone.hpp>

#include <vector>

namespace torific {

/// Monomial coordinate change u_i = prod_j y_j^{a^j_i} attached to a regular
/// full-dimensional cone: the exponent of y_j in u_i is the i-th coordinate
/// of the j-th ray. Carries the induced values nu(y_j), split into the
/// positive ones (the sigma_w directions) and the zero ones (the center).
struct MonomialMap {
    IMat rays;                        // rows: y_j, columns: u_i; a^j_i = rays[j][i]
    std::vector<GroupElement> y_values;
    std::vector<size_t> sigma_w_rows; // nu(y_j) > 0
    std::vector<size_t> center_rows;  // nu(y_j) == 0
};

/// Build the map from a regular maximal cone and the generator values
/// gamma_1..gamma_b, solving V^T nu(y) = gamma exactly over Z.
inline MonomialMap monomial_map_from_cone(const Cone& sigma,
                                          const std::vector<GroupElement>& gamma)
{
    size_t b = sigma.b;
    if (sigma.rays.size() != b) throw cone_error("monomial_map_from_cone: cone not maximal");
    if (!is_regular(sigma)) throw cone_error("monomial_map_from_cone: cone not regular");
    if (gamma.size() != b) throw cone_error("monomial_map_from_cone: gamma count mismatch");
    const auto& ctx = gamma.front().context();
    int rk = ctx->rank();

    MonomialMap m;
    m.rays = sigma.rays;
    IMat vt_inv = unimodular_inverse(mat_transpose(sigma.rays));
    for (size_t j = 0; j < b; ++j) {
        std::vector<long long> coords(rk, 0);
        for (int c = 0; c < rk; ++c) {
            Int acc = 0;
            for (size_t i = 0; i < b; ++i) acc += vt_inv[j][i] * Int(gamma[i].coords()[c]);
            coords[c] = static_cast<long long>(acc);
        }
        m.y_values.emplace_back(ctx, std::move(coords));
    }
    for (size_t j = 0; j < b; ++j) {
        const auto& v = m.y_values[j];
        if (v.is_zero())
            m.center_rows.push_back(j);
        else if (is_positive(v))
            m.sigma_w_rows.push_back(j);
        else
            throw cone_error("monomial_map_from_cone: negative y-value (cone not adapted to w)");
    }
    // invariant: sum_j a^j_i nu(y_j) == gamma_i
    for (size_t i = 0; i < b; ++i) {
        GroupElement acc = GroupElement::zero(ctx);
        for (size_t j = 0; j < b; ++j)
            acc = acc + static_cast<long long>(m.rays[j][i]) * m.y_values[j];
        if (!(acc == gamma[i]))
            throw cone_error("monomial_map_from_cone: value identity failed");
    }
    return m;
}

} // namespace torific
