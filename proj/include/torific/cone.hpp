#pragma once

#include <torific/lattice.hpp>
#include <torific/ordered_group.hpp>
#include <torific/semigroup.hpp>

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace torific {

struct cone_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using RVec = std::vector<Rat>;

inline IVec primitive_vector(IVec v)
{
    Int g = 0;
    for (const auto& x : v) g = int_gcd(g, x);
    if (g == 0) throw cone_error("primitive_vector: zero vector");
    for (auto& x : v) x /= g;
    return v;
}

inline Int dot_ii(const IVec& a, const IVec& b)
{
    if (a.size() != b.size()) throw cone_error("dot: size mismatch");
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rat dot_ri(const RVec& a, const IVec& b)
{
    if (a.size() != b.size()) throw cone_error("dot: size mismatch");
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
    return s;
}

/// Solve A x = rhs over Q (A may be overdetermined with full column rank);
/// returns nullopt when inconsistent, throws when the solution is not unique.
inline std::optional<RVec> solve_rational(std::vector<RVec> A, RVec rhs)
{
    size_t rows = A.size();
    size_t cols = rows == 0 ? 0 : A[0].size();
    size_t rank = 0;
    std::vector<size_t> pivot_col;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t piv = rank;
        while (piv < rows && A[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[piv], A[rank]);
        std::swap(rhs[piv], rhs[rank]);
        Rat inv = Rat(1) / A[rank][col];
        for (size_t j = col; j < cols; ++j) A[rank][j] *= inv;
        rhs[rank] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == rank || A[i][col] == 0) continue;
            Rat f = A[i][col];
            for (size_t j = col; j < cols; ++j) A[i][j] -= f * A[rank][j];
            rhs[i] -= f * rhs[rank];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (size_t i = rank; i < rows; ++i)
        if (rhs[i] != 0) return std::nullopt;
    if (rank < cols) throw cone_error("solve_rational: solution not unique");
    RVec x(cols, Rat(0));
    for (size_t i = 0; i < rank; ++i) x[pivot_col[i]] = rhs[i];
    return x;
}

/// Rational cone given by its generating rays (rows, primitive integers).
struct Cone {
    IMat rays;
    size_t b = 0;

    static Cone from_rays(IMat rows, size_t ambient)
    {
        Cone c;
        c.b = ambient;
        for (auto& r : rows) {
            if (r.size() != ambient) throw cone_error("Cone: ray dimension mismatch");
            c.rays.push_back(primitive_vector(std::move(r)));
        }
        return c;
    }

    size_t dim() const { return hnf_rows(rays).rank; }
};

inline bool cone_ray_sets_equal(const Cone& a, const Cone& b)
{
    auto key = [](const Cone& c) {
        std::set<IVec> s(c.rays.begin(), c.rays.end());
        return s;
    };
    return a.b == b.b && key(a) == key(b);
}

/// Regular (unimodular): rays are part of a Z-basis. For a full-dimensional
/// cone this is |det| == 1.
inline bool is_regular(const Cone& c)
{
    if (c.rays.empty()) return true;
    auto s = snf(c.rays);
    if (s.divisors.size() != c.rays.size()) return false; // rays dependent
    for (const auto& d : s.divisors)
        if (d != 1 && d != -1) return false;
    return true;
}

/// Membership x in cone(c) for a simplicial cone: solve x = sum alpha_i r_i,
/// alpha >= 0. Returns the barycentric coefficients on success.
inline std::optional<RVec> simplicial_membership(const Cone& c, const RVec& x)
{
    // columns = rays
    std::vector<RVec> A(c.b, RVec(c.rays.size(), Rat(0)));
    for (size_t j = 0; j < c.rays.size(); ++j)
        for (size_t i = 0; i < c.b; ++i) A[i][j] = Rat(c.rays[j][i]);
    auto sol = solve_rational(A, x);
    if (!sol) return std::nullopt;
    for (const auto& a : *sol)
        if (a < 0) return std::nullopt;
    return sol;
}

/// Extreme rays of { x : A x >= 0 } for small ambient dimension, by scanning
/// (b-1)-subsets of the inequality rows.
inline IMat extreme_rays(const IMat& A, size_t b)
{
    if (b == 0) return {};
    if (b > 4) throw resource_error("extreme_rays: ambient dimension capped at 4");
    auto feasible = [&](const IVec& d) {
        for (const auto& row : A)
            if (dot_ii(row, d) < 0) return false;
        return true;
    };
    std::set<IVec> out;
    if (b == 1) {
        IVec d{1};
        if (feasible(d)) out.insert(d);
        d[0] = -1;
        if (feasible(d)) out.insert(d);
    }
    size_t n = A.size();
    std::vector<size_t> idx;
    auto consider = [&](const IMat& sub) {
        IMat ker = left_kernel(mat_transpose(sub)); // {d : sub * d = 0} as rows
        if (ker.size() != 1) return;
        IVec d = primitive_vector(ker[0]);
        IVec nd = d;
        for (auto& x : nd) x = -x;
        for (const IVec& cand : {d, nd}) {
            if (!feasible(cand)) continue;
            // extremality: active rows must have rank b-1
            IMat act;
            for (const auto& row : A)
                if (dot_ii(row, cand) == 0) act.push_back(row);
            if (hnf_rows(act).rank == b - 1) out.insert(cand);
        }
    };
    // enumerate (b-1)-subsets
    std::vector<size_t> comb(b - 1);
    std::function<void(size_t, size_t)> rec = [&](size_t start, size_t k) {
        if (k == b - 1) {
            IMat sub;
            for (size_t i : comb) sub.push_back(A[i]);
            consider(sub);
            return;
        }
        for (size_t i = start; i < n; ++i) {
            comb[k] = i;
            rec(i + 1, k + 1);
        }
    };
    if (b >= 2 && n >= b - 1) rec(0, 0);
    IMat res(out.begin(), out.end());
    return res;
}

// ---------------------------------------------------------------------------
// Fans
// ---------------------------------------------------------------------------

struct Fan {
    size_t b = 0;
    std::vector<Cone> maximal; // all of dimension b
};

struct FanConstraints {
    IMat hyperplane_normals; // relation-lattice rows etc.
    IMat rays;               // prescribed rays (e.g. the weight cone for r=1)
};

struct FanAuditReport {
    bool regular = true;
    bool faces_compatible = true;
    bool covers_support = true;
    bool constraints_compatible = true;
    std::vector<std::string> defects;
    bool ok() const
    {
        return regular && faces_compatible && covers_support && constraints_compatible;
    }
};

namespace detail {

/// Is the face spanned by `face_rays` (a subset of c.rays) an actual face of
/// c? True iff some integer functional vanishes on the face rays and is
/// strictly positive on the remaining rays.
inline bool is_face_of(const Cone& c, const std::vector<IVec>& face_rays)
{
    std::set<IVec> fs(face_rays.begin(), face_rays.end());
    IMat rest;
    for (const auto& r : c.rays)
        if (!fs.count(r)) rest.push_back(r);
    if (rest.empty()) return true; // the cone itself
    // simplicial cone: every subset of its (independent) rays spans a face
    if (hnf_rows(c.rays).rank == c.rays.size()) return true;
    IMat face_mat(face_rays.begin(), face_rays.end());
    // functionals vanishing on the face span: right kernel rows
    IMat normals = face_mat.empty() ? identity_mat(c.b)
                                    : left_kernel(mat_transpose(face_mat));
    // search a nonnegative combination of kernel rows positive on `rest`:
    // desk scale — try single rows and pairwise sums with small coefficients
    auto positive_on_rest = [&](const IVec& n) {
        for (const auto& r : rest)
            if (dot_ii(n, r) <= 0) return false;
        for (const auto& f : face_rays)
            if (dot_ii(n, f) != 0) return false;
        return true;
    };
    std::vector<IVec> cands;
    for (const auto& n : normals) {
        cands.push_back(n);
        IVec neg = n;
        for (auto& x : neg) x = -x;
        cands.push_back(neg);
    }
    size_t base = cands.size();
    for (int k = 1; k <= 8; ++k)
        for (size_t i = 0; i < base; ++i)
            for (size_t j = 0; j < base; ++j) {
                if (i == j) continue;
                IVec n = cands[i];
                for (size_t m = 0; m < n.size(); ++m) n[m] = n[m] * k + cands[j][m];
                cands.push_back(n);
            }
    for (const auto& n : cands)
        if (positive_on_rest(n)) return true;
    return false;
}

inline std::vector<RVec> sample_points(size_t b)
{
    std::vector<RVec> pts;
    // deterministic strictly positive rationals exercising skew directions
    std::vector<std::vector<long>> seeds;
    if (b == 1)
        seeds = {{1}, {7}};
    else if (b == 2)
        seeds = {{1, 1}, {1, 2}, {2, 1}, {5, 3}, {3, 5}, {1, 7}, {7, 1}, {4, 9}, {9, 4}};
    else if (b == 3)
        seeds = {{1, 1, 1}, {1, 2, 3}, {3, 2, 1}, {2, 3, 9}, {1, 2, 4},  {5, 1, 1},
                 {1, 5, 1}, {1, 1, 5}, {4, 6, 13}, {7, 3, 2}, {2, 7, 3}, {3, 2, 7}};
    else
        seeds = {{1, 1, 1, 1}, {1, 2, 3, 4}, {4, 3, 2, 1}, {2, 5, 3, 7}, {7, 3, 5, 2}};
    for (const auto& s : seeds) {
        RVec p;
        for (long x : s) p.push_back(Rat(x));
        pts.push_back(std::move(p));
    }
    return pts;
}

} // namespace detail

inline FanAuditReport fan_audit(const Fan& f, const FanConstraints& constraints = {})
{
    FanAuditReport rep;
    for (size_t i = 0; i < f.maximal.size(); ++i) {
        const Cone& c = f.maximal[i];
        if (c.rays.size() != f.b || !is_regular(c)) {
            rep.regular = false;
            rep.defects.push_back("cone " + std::to_string(i) + " is not regular of full dim");
        }
    }
    // pairwise face compatibility: shared rays span a face of both cones, and
    // sampled common points lie in that shared face
    for (size_t i = 0; i + 1 < f.maximal.size() && rep.regular; ++i)
        for (size_t j = i + 1; j < f.maximal.size(); ++j) {
            const Cone& a = f.maximal[i];
            const Cone& c = f.maximal[j];
            std::set<IVec> ra(a.rays.begin(), a.rays.end());
            std::vector<IVec> shared;
            for (const auto& r : c.rays)
                if (ra.count(r)) shared.push_back(r);
            if (!detail::is_face_of(a, shared) || !detail::is_face_of(c, shared)) {
                rep.faces_compatible = false;
                rep.defects.push_back("cones " + std::to_string(i) + "," + std::to_string(j) +
                                      ": shared rays do not span a common face");
                continue;
            }
            // sample interior combinations of a; any that lie in c must lie in
            // the shared face
            Cone face = Cone{IMat(shared.begin(), shared.end()), f.b};
            for (const auto& w : detail::sample_points(a.rays.size())) {
                RVec p(f.b, Rat(0));
                for (size_t k = 0; k < a.rays.size(); ++k)
                    for (size_t m = 0; m < f.b; ++m) p[m] += w[k] * Rat(a.rays[k][m]);
                if (!simplicial_membership(c, p)) continue;
                bool in_face = false;
                if (!face.rays.empty()) in_face = simplicial_membership(face, p).has_value();
                if (!in_face) {
                    bool zero = std::all_of(p.begin(), p.end(),
                                            [](const Rat& x) { return x == 0; });
                    in_face = zero;
                }
                if (!in_face) {
                    rep.faces_compatible = false;
                    rep.defects.push_back("cones " + std::to_string(i) + "," +
                                          std::to_string(j) +
                                          ": overlap outside the shared face");
                    break;
                }
            }
        }
    // coverage of the quadrant on a certified sample
    for (const auto& p : detail::sample_points(f.b)) {
        bool hit = false;
        for (const auto& c : f.maximal)
            if (c.rays.size() == f.b && simplicial_membership(c, p)) {
                hit = true;
                break;
            }
        if (!hit) {
            rep.covers_support = false;
            rep.defects.push_back("sample point not covered by any maximal cone");
            break;
        }
    }
    // constraints: hyperplanes must not cross any cone; prescribed rays must
    // appear as fan rays
    for (const auto& n : constraints.hyperplane_normals)
        for (size_t i = 0; i < f.maximal.size(); ++i) {
            bool pos = false, neg = false;
            for (const auto& r : f.maximal[i].rays) {
                int s = sign_of(dot_ii(n, r));
                if (s > 0) pos = true;
                if (s < 0) neg = true;
            }
            if (pos && neg) {
                rep.constraints_compatible = false;
                rep.defects.push_back("cone " + std::to_string(i) +
                                      " crosses a constraint hyperplane");
            }
        }
    for (auto rray : constraints.rays) {
        IVec r = primitive_vector(rray);
        bool found = false;
        for (const auto& c : f.maximal)
            for (const auto& cr : c.rays)
                if (cr == r) found = true;
        if (!found) {
            rep.constraints_compatible = false;
            rep.defects.push_back("prescribed ray is not a ray of the fan");
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Weight cone
// ---------------------------------------------------------------------------

/// Generators of W = L^perp cap quadrant for a saturated relation lattice of
/// rank b-r with r <= 2.
inline Cone weight_cone(const RelationLattice& L)
{
    size_t b = L.b;
    if (L.basis.empty()) {
        // full quadrant
        return Cone::from_rays(identity_mat(b), b);
    }
    IMat V = left_kernel(mat_transpose(L.basis)); // rows span L^perp over Z
    size_t r = V.size();
    if (r != b - L.basis.size()) throw cone_error("weight_cone: rank mismatch");
    if (r == 1) {
        IVec v = primitive_vector(V[0]);
        bool nonneg = std::all_of(v.begin(), v.end(), [](const Int& x) { return x >= 0; });
        bool nonpos = std::all_of(v.begin(), v.end(), [](const Int& x) { return x <= 0; });
        if (nonpos && !nonneg)
            for (auto& x : v) x = -x;
        else if (!nonneg)
            throw cone_error("weight_cone: kernel line misses the quadrant");
        return Cone::from_rays({v}, b);
    }
    if (r == 2) {
        // inequality description of {c : c_1 V_1 + c_2 V_2 in quadrant}
        IMat A;
        for (size_t j = 0; j < b; ++j) A.push_back(IVec{V[0][j], V[1][j]});
        IMat ext = extreme_rays(A, 2);
        if (ext.empty()) throw cone_error("weight_cone: empty intersection with quadrant");
        IMat rays;
        for (const auto& c : ext) {
            IVec w(b, 0);
            for (size_t j = 0; j < b; ++j) w[j] = c[0] * V[0][j] + c[1] * V[1][j];
            rays.push_back(primitive_vector(w));
        }
        return Cone::from_rays(rays, b);
    }
    throw resource_error("weight_cone: rank > 2 not supported");
}

// ---------------------------------------------------------------------------
// Regular subdivision of the quadrant
// ---------------------------------------------------------------------------

namespace detail {

/// Triangulate a pointed full-dimensional chamber cone into simplicial cones
/// using only its extreme rays. Supported: b <= 3 in general, b == 4 only
/// when already simplicial.
inline std::vector<Cone> triangulate_chamber(const IMat& rays, size_t b)
{
    if (rays.size() < b) throw cone_error("triangulate_chamber: not full-dimensional");
    if (rays.size() == b) return {Cone::from_rays(rays, b)};
    if (b == 2) {
        // sort by slope, take consecutive pairs
        IMat sorted = rays;
        std::sort(sorted.begin(), sorted.end(), [](const IVec& a, const IVec& c) {
            return a[0] * c[1] - a[1] * c[0] > 0; // a counterclockwise-before c
        });
        std::vector<Cone> out;
        for (size_t i = 0; i + 1 < sorted.size(); ++i)
            out.push_back(Cone::from_rays({sorted[i], sorted[i + 1]}, b));
        return out;
    }
    if (b == 3) {
        // cross-section with x+y+z = const: rays of a pointed cone in the
        // quadrant have positive coordinate sum
        std::vector<RVec> pts;
        for (const auto& r : rays) {
            Rat s = Rat(r[0] + r[1] + r[2]);
            if (s <= 0) throw cone_error("triangulate_chamber: ray outside the quadrant");
            pts.push_back({Rat(r[0]) / s, Rat(r[1]) / s});
        }
        // order the polygon vertices; carry original indices through
        std::vector<size_t> order(pts.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        RVec c(2, Rat(0));
        for (const auto& p : pts) {
            c[0] += p[0];
            c[1] += p[1];
        }
        c[0] /= Rat(static_cast<long>(pts.size()));
        c[1] /= Rat(static_cast<long>(pts.size()));
        auto half = [&](const RVec& p) {
            Rat dx = p[0] - c[0], dy = p[1] - c[1];
            if (dy > 0 || (dy == 0 && dx > 0)) return 0;
            return 1;
        };
        std::sort(order.begin(), order.end(), [&](size_t ia, size_t ib) {
            const RVec& a = pts[ia];
            const RVec& b2 = pts[ib];
            int ha = half(a), hb = half(b2);
            if (ha != hb) return ha < hb;
            Rat ax = a[0] - c[0], ay = a[1] - c[1];
            Rat bx = b2[0] - c[0], by = b2[1] - c[1];
            Rat cross = ax * by - ay * bx;
            if (cross != 0) return cross > 0;
            return ax * ax + ay * ay < bx * bx + by * by;
        });
        std::vector<Cone> out;
        for (size_t i = 1; i + 1 < order.size(); ++i)
            out.push_back(
                Cone::from_rays({rays[order[0]], rays[order[i]], rays[order[i + 1]]}, b));
        return out;
    }
    throw resource_error("triangulate_chamber: non-simplicial chambers supported only for b<=3");
}

/// Nonzero lattice point of the half-open parallelepiped of a simplicial
/// full-dimensional cone, minimizing the multiplier sum (ties: lexicographic).
inline std::optional<IVec> parallelepiped_point(const Cone& c, RVec* alpha_out)
{
    size_t b = c.b;
    // bounding box of { sum alpha_i r_i : 0 <= alpha_i < 1 }
    std::vector<Int> lo(b, 0), hi(b, 0);
    for (size_t i = 0; i < b; ++i)
        for (const auto& r : c.rays) {
            if (r[i] > 0) hi[i] += r[i];
            if (r[i] < 0) lo[i] += r[i];
        }
    std::optional<IVec> best;
    RVec best_alpha;
    Rat best_sum;
    IVec p(b, 0);
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == b) {
            bool zero = std::all_of(p.begin(), p.end(), [](const Int& x) { return x == 0; });
            if (zero) return;
            RVec x;
            for (const auto& v : p) x.push_back(Rat(v));
            std::vector<RVec> A(b, RVec(b, Rat(0)));
            for (size_t col = 0; col < b; ++col)
                for (size_t row = 0; row < b; ++row) A[row][col] = Rat(c.rays[col][row]);
            auto sol = solve_rational(A, x);
            if (!sol) return;
            Rat sum = 0;
            for (const auto& a : *sol) {
                if (a < 0 || a >= 1) return;
                sum += a;
            }
            if (sum == 0) return;
            if (!best || sum < best_sum || (sum == best_sum && p < *best)) {
                best = p;
                best_sum = sum;
                best_alpha = *sol;
            }
            return;
        }
        for (Int v = lo[i]; v <= hi[i]; ++v) {
            p[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    if (best && alpha_out) *alpha_out = best_alpha;
    return best;
}

/// Stellar-subdivide at minimal parallelepiped lattice points until every
/// cone is regular. Each step subdivides the WHOLE collection at the chosen
/// ray, so walls shared between cones stay matched (no hanging nodes).
inline std::vector<Cone> unimodularize(std::vector<Cone> cones, size_t budget, size_t* steps_used)
{
    size_t steps = 0;
    for (;;) {
        size_t bad = cones.size();
        for (size_t i = 0; i < cones.size(); ++i)
            if (!is_regular(cones[i])) {
                bad = i;
                break;
            }
        if (bad == cones.size()) break;
        if (++steps > budget) throw resource_error("unimodularize: stellar step budget exceeded");
        auto p = parallelepiped_point(cones[bad], nullptr);
        if (!p) throw cone_error("unimodularize: no subdivision point in a non-regular cone");
        IVec pv = primitive_vector(*p);
        RVec x;
        for (const auto& v : pv) x.push_back(Rat(v));
        std::vector<Cone> next;
        for (auto& c : cones) {
            auto alpha = simplicial_membership(c, x);
            if (!alpha) {
                next.push_back(std::move(c));
                continue;
            }
            bool split = false;
            for (size_t i = 0; i < c.rays.size(); ++i) {
                if ((*alpha)[i] == 0) continue; // pv lies in the opposite face
                IMat rays = c.rays;
                if (rays[i] == pv) { // pv already a ray: nothing to split
                    split = false;
                    break;
                }
                rays[i] = pv;
                next.push_back(Cone::from_rays(std::move(rays), c.b));
                split = true;
            }
            if (!split) next.push_back(std::move(c));
        }
        cones = std::move(next);
    }
    if (steps_used) *steps_used = steps;
    return cones;
}

} // namespace detail

/// Regular fan with support the quadrant, compatible with the constraints:
/// chamber decomposition by the constraint hyperplanes (prescribed rays
/// contribute the hyperplanes through them), triangulation, then stellar
/// unimodularization under a step budget.
inline Fan regular_subdivision(size_t b, const FanConstraints& constraints,
                               size_t max_stellar_steps = 512)
{
    if (b == 0 || b > 4) throw resource_error("regular_subdivision: supported for 1 <= b <= 4");
    IMat normals;
    auto add_normal = [&](IVec n) {
        bool zero = std::all_of(n.begin(), n.end(), [](const Int& x) { return x == 0; });
        if (zero) return;
        n = primitive_vector(std::move(n));
        IVec neg = n;
        for (auto& x : neg) x = -x;
        for (const auto& m : normals)
            if (m == n || m == neg) return;
        normals.push_back(std::move(n));
    };
    for (auto n : constraints.hyperplane_normals) add_normal(std::move(n));
    for (auto r : constraints.rays) {
        // hyperplanes through the prescribed ray: any basis of its orthogonal
        // complement
        IMat perp = left_kernel(mat_transpose(IMat{r}));
        for (auto& n : perp) add_normal(std::move(n));
    }
    // chambers: sign vectors over the normals
    std::vector<Cone> simplicial;
    size_t k = normals.size();
    if (k > 12) throw resource_error("regular_subdivision: too many constraint hyperplanes");
    for (size_t mask = 0; mask < (size_t{1} << k); ++mask) {
        IMat A = identity_mat(b); // quadrant
        for (size_t i = 0; i < k; ++i) {
            IVec n = normals[i];
            if (mask & (size_t{1} << i))
                for (auto& x : n) x = -x;
            A.push_back(std::move(n));
        }
        IMat rays = extreme_rays(A, b);
        if (rays.size() < b) continue;
        if (hnf_rows(rays).rank < b) continue; // lower-dimensional slab
        // interior check: some strictly positive combination exists iff no
        // inequality vanishes on all extreme rays
        bool full = true;
        for (const auto& row : A) {
            bool strict = false;
            for (const auto& r : rays)
                if (dot_ii(row, r) > 0) strict = true;
            bool all_zero = true;
            for (const auto& r : rays)
                if (dot_ii(row, r) != 0) all_zero = false;
            (void)strict;
            if (all_zero && row.size() == b) {
                // chamber contained in a wall: degenerate for this sign vector
                full = false;
                break;
            }
        }
        if (!full) continue;
        auto tris = detail::triangulate_chamber(rays, b);
        for (auto& t : tris) {
            // dedupe across sign vectors (walls shared by two chambers)
            bool dup = false;
            for (const auto& s : simplicial)
                if (cone_ray_sets_equal(s, t)) dup = true;
            if (!dup) simplicial.push_back(std::move(t));
        }
    }
    if (simplicial.empty()) throw cone_error("regular_subdivision: empty chamber decomposition");
    size_t steps = 0;
    Fan fan;
    fan.b = b;
    fan.maximal = detail::unimodularize(std::move(simplicial), max_stellar_steps, &steps);
    // canonical order for reproducibility
    std::sort(fan.maximal.begin(), fan.maximal.end(), [](const Cone& x, const Cone& y) {
        auto kx = x.rays;
        auto ky = y.rays;
        std::sort(kx.begin(), kx.end());
        std::sort(ky.begin(), ky.end());
        return kx < ky;
    });
    return fan;
}

// ---------------------------------------------------------------------------
// Weight vectors and sigma_w
// ---------------------------------------------------------------------------

/// w = (gamma_1, ..., gamma_b): entries are positive elements of the ordered
/// group, supporting certified-sign dot products with integer vectors.
struct WeightVector {
    std::vector<GroupElement> entries;

    GroupContextPtr context() const
    {
        if (entries.empty()) throw cone_error("WeightVector: empty");
        return entries.front().context();
    }
    size_t b() const { return entries.size(); }

    int dot_sign(const IVec& v) const
    {
        std::vector<Int> coeffs(v.begin(), v.end());
        return combination_sign(entries, coeffs);
    }
};

/// Decompose w over the rays of `subset` (columns), separately for each group
/// coordinate; returns per-ray coefficients as GroupElements when solvable.
inline std::optional<std::vector<GroupElement>> decompose_weight(const WeightVector& w,
                                                                const IMat& rays)
{
    const auto& ctx = w.context();
    int rk = ctx->rank();
    size_t b = w.b();
    size_t nrays = rays.size();
    // one rational solve per group coordinate m: sum_j beta_j rays[j] = w^(m)
    std::vector<RVec> betas; // betas[m][j]
    for (int m = 0; m < rk; ++m) {
        std::vector<RVec> A(b, RVec(nrays, Rat(0)));
        RVec rhs(b, Rat(0));
        for (size_t j = 0; j < nrays; ++j)
            for (size_t i = 0; i < b; ++i) A[i][j] = Rat(rays[j][i]);
        for (size_t i = 0; i < b; ++i) rhs[i] = Rat(w.entries[i].coords()[m]);
        auto sol = solve_rational(A, rhs);
        if (!sol) return std::nullopt;
        betas.push_back(*sol);
    }
    // alpha_j = sum_m betas[m][j] * weight_m must itself be a group value;
    // require integer coordinates (clearing denominators is not needed for
    // sign decisions, so scale by the common denominator)
    std::vector<GroupElement> alphas;
    for (size_t j = 0; j < nrays; ++j) {
        // represent alpha_j by the integer vector of scaled coordinates: the
        // sign is invariant under positive scaling
        Int den = 1;
        for (int m = 0; m < rk; ++m)
            den = int_lcm(den, Int(boost::multiprecision::denominator(betas[m][j])));
        std::vector<long long> coords(rk, 0);
        for (int m = 0; m < rk; ++m) {
            Rat scaled = betas[m][j] * Rat(den);
            coords[m] = static_cast<long long>(Int(boost::multiprecision::numerator(scaled)));
        }
        alphas.emplace_back(ctx, std::move(coords));
    }
    return alphas;
}

/// The unique r-dimensional fan cone containing w in its relative interior;
/// throws when none or several exist (fan defect).
inline Cone find_sigma_w(const Fan& f, const WeightVector& w, size_t r)
{
    if (w.b() != f.b) throw cone_error("find_sigma_w: dimension mismatch");
    std::vector<Cone> hits;
    std::set<std::set<IVec>> seen;
    for (const auto& c : f.maximal) {
        size_t n = c.rays.size();
        // all r-subsets of the cone's rays
        std::vector<size_t> comb(r);
        std::function<void(size_t, size_t)> rec = [&](size_t start, size_t kk) {
            if (kk == r) {
                IMat sub;
                for (size_t idx : comb) sub.push_back(c.rays[idx]);
                std::set<IVec> key(sub.begin(), sub.end());
                if (seen.count(key)) return;
                seen.insert(key);
                auto dec = decompose_weight(w, sub);
                if (!dec) return;
                bool interior = true;
                for (const auto& a : *dec)
                    if (!is_positive(a)) {
                        interior = false;
                        break;
                    }
                if (interior) hits.push_back(Cone{sub, f.b});
                return;
            }
            for (size_t i = start; i < n; ++i) {
                comb[kk] = i;
                rec(i + 1, kk + 1);
            }
        };
        if (r >= 1 && r <= n) rec(0, 0);
    }
    if (hits.empty()) throw cone_error("find_sigma_w: no cone contains w in its relative interior");
    if (hits.size() > 1)
        throw cone_error("find_sigma_w: sigma_w not unique (fan defect)");
    return hits.front();
}

// ---------------------------------------------------------------------------
// Jacobi-Perron refinement (r = 2: subtractive continued fraction)
// ---------------------------------------------------------------------------

inline bool dual_contains(const Cone& c, const IVec& m)
{
    for (const auto& r : c.rays)
        if (dot_ii(m, r) < 0) return false;
    return true;
}

inline std::vector<Cone> jacobi_perron_refine(const Cone& sigma0, const WeightVector& w,
                                              size_t steps)
{
    size_t r = sigma0.rays.size();
    if (w.b() != sigma0.b) throw cone_error("jacobi_perron_refine: dimension mismatch");
    if (r == 1) return std::vector<Cone>(steps + 1, sigma0);
    if (r != 2 || sigma0.b != 2)
        throw resource_error("jacobi_perron_refine: implemented for r = 2");
    if (!is_regular(sigma0)) throw cone_error("jacobi_perron_refine: cone not regular");
    auto det_sign_with_w = [&](const IVec& v) {
        // sign of det(v, w) = v0*w1 - v1*w0 in the group
        std::vector<Int> coeffs{Int(-v[1]), Int(v[0])};
        return combination_sign({w.entries[0], w.entries[1]}, coeffs);
    };
    IVec A = sigma0.rays[0];
    IVec B = sigma0.rays[1];
    // orient so that det(A, w) > 0 > det(B, w) (w strictly between A and B)
    if (det_sign_with_w(A) < 0) std::swap(A, B);
    if (det_sign_with_w(A) <= 0 || det_sign_with_w(B) >= 0)
        throw cone_error("jacobi_perron_refine: w not in the interior (hits a face?)");
    std::vector<Cone> out;
    out.push_back(Cone::from_rays({A, B}, 2));
    for (size_t s = 0; s < steps; ++s) {
        IVec C{A[0] + B[0], A[1] + B[1]};
        int sgn = det_sign_with_w(C);
        if (sgn == 0)
            throw cone_error("jacobi_perron_refine: w hits a face (weights not independent?)");
        if (sgn > 0)
            A = C;
        else
            B = C;
        out.push_back(Cone::from_rays({A, B}, 2));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Projection compatibility between uniformizer levels
// ---------------------------------------------------------------------------

struct ProjectionReport {
    bool inclusion = true;
    size_t image_dim = 0;
    std::vector<std::vector<Int>> e_matrix; // projected big rays over small rays
    std::vector<std::string> defects;
    bool ok() const { return inclusion && defects.empty(); }
};

/// pi(sigma_big) subseteq sigma_small under the coordinate projection that
/// drops the trailing b_big - b_small coordinates; emits the nonnegative
/// integer matrix expressing projected rays over the small cone's rays.
inline ProjectionReport projection_compatibility(const Cone& sigma_small, const Cone& sigma_big)
{
    ProjectionReport rep;
    if (sigma_big.b < sigma_small.b) {
        rep.inclusion = false;
        rep.defects.push_back("big cone has fewer coordinates");
        return rep;
    }
    IMat projected;
    for (const auto& r : sigma_big.rays)
        projected.emplace_back(r.begin(), r.begin() + sigma_small.b);
    rep.image_dim = hnf_rows(projected).rank;
    for (const auto& p : projected) {
        bool zero = std::all_of(p.begin(), p.end(), [](const Int& x) { return x == 0; });
        if (zero) {
            rep.e_matrix.emplace_back(sigma_small.rays.size(), Int(0));
            continue;
        }
        std::vector<RVec> A(sigma_small.b, RVec(sigma_small.rays.size(), Rat(0)));
        RVec rhs(sigma_small.b, Rat(0));
        for (size_t j = 0; j < sigma_small.rays.size(); ++j)
            for (size_t i = 0; i < sigma_small.b; ++i) A[i][j] = Rat(sigma_small.rays[j][i]);
        for (size_t i = 0; i < sigma_small.b; ++i) rhs[i] = Rat(p[i]);
        std::optional<RVec> sol;
        try {
            sol = solve_rational(A, rhs);
        } catch (const cone_error&) {
            sol = std::nullopt;
        }
        if (!sol) {
            rep.inclusion = false;
            rep.defects.push_back("projected ray escapes the span of the small cone");
            return rep;
        }
        std::vector<Int> row;
        for (const auto& a : *sol) {
            if (a < 0) {
                rep.inclusion = false;
                rep.defects.push_back("projected ray needs a negative coefficient");
                return rep;
            }
            if (boost::multiprecision::denominator(a) != 1) {
                rep.inclusion = false;
                rep.defects.push_back("projected ray has non-integral coordinates over the "
                                      "small cone's rays");
                return rep;
            }
            row.push_back(Int(boost::multiprecision::numerator(a)));
        }
        rep.e_matrix.push_back(std::move(row));
    }
    return rep;
}

} // namespace torific
