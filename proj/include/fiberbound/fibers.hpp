#pragma once

/*
 * Fibers of dimension m-1: their equations h_y, discovery by sampling the
 * hypersurface Z(F), and the degree chain
 *
 *   sum deg h_y <= sum (2e-1) deg P_e <= deg F <= 3(d-1).
 *
 * Discovery walks random lines, intersects them with the square-free part
 * of F and maps every intersection point x to y = phi(x).  Points whose
 * coordinates live in a small extension F_p[s]/(q) are used too: a contracted
 * divisor can be defined over F_p with an F_p-rational image y while having
 * no F_p-rational points of its own (x0^2 + x2^2 when -1 is a non-residue).
 */

#include "fiberbound/errors.hpp"
#include "fiberbound/gcd.hpp"
#include "fiberbound/jacobian.hpp"
#include "fiberbound/linalg.hpp"
#include "fiberbound/upoly.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace fiberbound {

template <class Field>
struct ProjectivePoint
{
    std::vector<typename Field::value_type> coords;

    friend bool operator==(const ProjectivePoint& a, const ProjectivePoint& b) { return a.coords == b.coords; }
};

/** Scales so the first nonzero coordinate is 1. */
template <class Field>
ProjectivePoint<Field> make_projective_point(const Field& field, std::vector<typename Field::value_type> coords)
{
    auto it = std::find_if(coords.begin(), coords.end(), [&](const auto& c) { return !field.is_zero(c); });
    if (it == coords.end()) throw Error(Errc::BadPoint, "all coordinates are zero");
    auto inv = field.inv(*it);
    for (auto& c : coords) c = field.mul(c, inv);
    return ProjectivePoint<Field>{std::move(coords)};
}

template <class Field>
bool point_less(const Field& field, const ProjectivePoint<Field>& a, const ProjectivePoint<Field>& b)
{
    for (std::size_t i = 0; i < std::min(a.coords.size(), b.coords.size()); ++i) {
        auto c = field.compare(a.coords[i], b.coords[i]);
        if (c != 0) return c < 0;
    }
    return a.coords.size() < b.coords.size();
}

template <class Field>
std::string to_string(const Field& field, const ProjectivePoint<Field>& y)
{
    std::string s = "(";
    for (std::size_t i = 0; i < y.coords.size(); ++i) {
        if (i) s += ":";
        s += field.to_string(y.coords[i]);
    }
    return s + ")";
}

template <class Field>
std::vector<typename Field::value_type> evaluate_forms(const RationalMapInput<Field>& in,
                                                       std::span<const typename Field::value_type> x)
{
    std::vector<typename Field::value_type> out;
    for (const auto& fi : in.f) out.push_back(evaluate(fi, x));
    return out;
}

/** h_y = gcd(l_0(f), .., l_n(f)) with l_y = T_pivot / y_pivot and l_i = T_i - y_i l_y.
 * The pivot defaults to the first nonzero coordinate.  Returns 1 when the fiber has
 * no divisorial part. */
template <class Field>
MvPoly<Field> fiber_equation(const RationalMapInput<Field>& in, const ProjectivePoint<Field>& y,
                             std::optional<std::size_t> pivot = std::nullopt)
{
    const Field& F = in.field;
    if (y.coords.size() != in.n + 1) throw Error(Errc::BadPoint, "target point needs n + 1 coordinates");
    std::size_t i0 = 0;
    if (pivot) {
        i0 = *pivot;
        if (i0 > in.n || F.is_zero(y.coords[i0])) throw Error(Errc::BadPoint, "pivot coordinate is zero");
    } else {
        while (i0 <= in.n && F.is_zero(y.coords[i0])) ++i0;
        if (i0 > in.n) throw Error(Errc::BadPoint, "all coordinates are zero");
    }
    auto ly = in.f[i0].scaled(F.inv(y.coords[i0]));
    std::vector<MvPoly<Field>> combos;
    for (std::size_t i = 0; i <= in.n; ++i) {
        auto li = in.f[i] - ly.scaled(y.coords[i]);
        if (!li.is_zero()) combos.push_back(std::move(li));
    }
    if (combos.empty()) throw Error(Errc::AllCombinationsZero, "every l_i(f) vanishes at " + to_string(F, y));
    return detail::gcd_of_list(std::move(combos), F, in.nvars());
}

template <class Field>
struct FiberRecord
{
    ProjectivePoint<Field> y;
    MvPoly<Field> h;
    std::vector<SquarefreePart<Field>> sqfree;
    std::int64_t deg_h = 0;
    std::int64_t weighted_deg = 0; ///< sum (2e - 1) deg P_e
};

template <class Field>
FiberRecord<Field> make_fiber_record(ProjectivePoint<Field> y, MvPoly<Field> h)
{
    FiberRecord<Field> r{std::move(y), h.monic(), {}, 0, 0};
    if (!r.h.is_constant()) r.sqfree = squarefree_decompose(r.h);
    r.deg_h = r.h.total_degree();
    r.weighted_deg = weighted_degree(r.sqfree);
    return r;
}

// ---------------------------------------------------------------------------
// sampling along random lines (F_p only)

struct SampleLine
{
    std::vector<std::uint64_t> base; ///< base[chart] = 1
    std::vector<std::uint64_t> dir;  ///< dir[chart] = 0
};

namespace detail {

struct UPolyRing
{
    using value_type = UPoly;
    PrimeField field;
    UPoly zero() const { return UPoly(field); }
    UPoly one() const { return UPoly::constant(field, 1); }
    UPoly embed(std::uint64_t c) const { return UPoly::constant(field, c); }
    UPoly add(const UPoly& a, const UPoly& b) const { return a + b; }
    UPoly mul(const UPoly& a, const UPoly& b) const { return a * b; }
};

} // namespace detail

inline SampleLine random_line(const PrimeField& F, std::size_t nvars, std::mt19937_64& rng)
{
    SampleLine line;
    std::size_t chart = rng() % nvars;
    for (std::size_t j = 0; j < nvars; ++j) {
        line.base.push_back(j == chart ? 1 : F.random(rng));
        line.dir.push_back(j == chart ? 0 : F.random(rng));
    }
    if (std::all_of(line.dir.begin(), line.dir.end(), [](auto v) { return v == 0; })) line.dir[(chart + 1) % nvars] = 1;
    return line;
}

/** h restricted to t -> base + t * dir. */
inline UPoly restrict_to_line(const MvPoly<PrimeField>& h, const SampleLine& line)
{
    detail::UPolyRing ring{h.field()};
    std::vector<UPoly> pt;
    for (std::size_t j = 0; j < line.base.size(); ++j) pt.push_back(UPoly(h.field(), {line.base[j], line.dir[j]}));
    return evaluate_in(ring, h, std::span<const UPoly>(pt));
}

/** Calls `on_rational(x)` for every F_p-point of Z(h) on `budget` random lines and
 * `on_extension(E, x)` for every point over F_p[s]/(q), deg q in [2, max_ext].
 * Deterministic given `seed`; each line has its own derived sub-seed. */
template <class OnRational, class OnExtension>
void visit_line_points(const MvPoly<PrimeField>& h, std::size_t budget, std::uint64_t seed, int max_ext,
                       OnRational&& on_rational, OnExtension&& on_extension)
{
    const PrimeField& F = h.field();
    const std::size_t nvars = h.nvars();
    for (std::size_t i = 0; i < budget; ++i) {
        std::uint64_t sub = derive_seed(seed, i);
        std::mt19937_64 rng(sub);
        auto line = random_line(F, nvars, rng);
        auto u = restrict_to_line(h, line);
        if (u.degree() <= 0) continue;
        auto factors = low_degree_factors(u, std::max(1, max_ext), derive_seed(sub, 1));
        for (const auto& lin : factors[1]) {
            auto t = F.neg(lin[0]);
            std::vector<std::uint64_t> x(nvars);
            for (std::size_t j = 0; j < nvars; ++j) x[j] = F.add(line.base[j], F.mul(t, line.dir[j]));
            on_rational(x);
        }
        for (int k = 2; k <= max_ext; ++k)
            for (const auto& q : factors[static_cast<std::size_t>(k)]) {
                ExtensionField E(q);
                auto s = E.generator();
                std::vector<UPoly> x;
                for (std::size_t j = 0; j < nvars; ++j)
                    x.push_back(E.add(E.embed(line.base[j]), E.mul(s, E.embed(line.dir[j]))));
                on_extension(E, x);
            }
    }
}

/** Distinct F_p-rational points of Z(h), in discovery order. */
inline std::vector<ProjectivePoint<PrimeField>> sample_hypersurface_points(const MvPoly<PrimeField>& h,
                                                                           std::size_t budget, std::uint64_t seed)
{
    if (h.is_constant()) throw std::invalid_argument("cannot sample a constant hypersurface");
    std::vector<ProjectivePoint<PrimeField>> out;
    std::set<std::vector<std::uint64_t>> seen;
    visit_line_points(
        h, budget, seed, 1,
        [&](const std::vector<std::uint64_t>& x) {
            auto p = make_projective_point(h.field(), x);
            if (seen.insert(p.coords).second) out.push_back(std::move(p));
        },
        [](const ExtensionField&, const std::vector<UPoly>&) {});
    return out;
}

inline std::vector<ProjectivePoint<RationalField>> sample_hypersurface_points(const MvPoly<RationalField>&,
                                                                              std::size_t, std::uint64_t)
{
    throw Error(Errc::RationalModeUnsupported, "hypersurface sampling needs a prime field");
}

struct DiscoveryOptions
{
    std::size_t budget = 200;
    std::uint64_t seed = 42;
    int max_extension_degree = 2;
};

template <class Field>
struct DiscoveryResult
{
    std::vector<FiberRecord<Field>> records; ///< sorted by y
    std::size_t base_points_skipped = 0;
    std::size_t points_examined = 0;
    std::size_t images_tested = 0;       ///< distinct rational y run through fiber_equation
    std::int64_t squarefree_degree_F = 0;
    std::int64_t covered_degree = 0;     ///< sum of deg P_e over all records
};

namespace detail {

template <class Ring>
std::optional<std::vector<std::uint64_t>> rational_image(const Ring& E, std::vector<typename Ring::value_type> fx)
{
    auto it = std::find_if(fx.begin(), fx.end(), [&](const auto& v) { return !E.is_zero(v); });
    if (it == fx.end()) return std::nullopt;
    auto inv = E.inv(*it);
    std::vector<std::uint64_t> y;
    for (auto& v : fx) {
        auto w = E.mul(v, inv);
        if (!E.in_base(w)) return std::vector<std::uint64_t>{};
        y.push_back(E.base_value(w));
    }
    return y;
}

} // namespace detail

/** Finds the (m-1)-dimensional fibers whose divisors meet the sampled lines. */
inline DiscoveryResult<PrimeField> discover_fibers(const RationalMapInput<PrimeField>& in,
                                                   const MvPoly<PrimeField>& F, const DiscoveryOptions& opt = {})
{
    DiscoveryResult<PrimeField> res;
    if (F.is_zero() || F.is_constant()) return res;
    auto H = squarefree_part(F);
    res.squarefree_degree_F = H.total_degree();
    const PrimeField& K = in.field;

    std::set<std::vector<std::uint64_t>> tested;
    std::vector<FiberRecord<PrimeField>> found;

    auto process = [&](const std::vector<std::uint64_t>& y) {
        if (!tested.insert(y).second) return;
        ++res.images_tested;
        auto pt = ProjectivePoint<PrimeField>{y};
        auto h = fiber_equation(in, pt);
        if (!h.is_constant()) found.push_back(make_fiber_record(std::move(pt), std::move(h)));
    };
    auto on_known_divisor = [&](auto&& value_of) {
        for (const auto& r : found)
            if (value_of(r.h)) return true;
        return false;
    };

    visit_line_points(
        H, opt.budget, opt.seed, opt.max_extension_degree,
        [&](const std::vector<std::uint64_t>& x) {
            ++res.points_examined;
            std::span<const std::uint64_t> xs(x);
            if (on_known_divisor([&](const MvPoly<PrimeField>& h) { return evaluate(h, xs) == 0; })) return;
            auto fx = evaluate_forms(in, xs);
            auto y = detail::rational_image(detail::SelfRing<PrimeField>(K), fx);
            if (!y) {
                ++res.base_points_skipped;
                return;
            }
            process(*y);
        },
        [&](const ExtensionField& E, const std::vector<UPoly>& x) {
            ++res.points_examined;
            std::span<const UPoly> xs(x);
            if (on_known_divisor([&](const MvPoly<PrimeField>& h) { return E.is_zero(evaluate_in(E, h, xs)); }))
                return;
            std::vector<UPoly> fx;
            for (const auto& fi : in.f) fx.push_back(evaluate_in(E, fi, xs));
            auto y = detail::rational_image(E, fx);
            if (!y) {
                ++res.base_points_skipped;
                return;
            }
            if (!y->empty()) process(*y);
        });

    std::sort(found.begin(), found.end(),
              [&](const auto& a, const auto& b) { return point_less(K, a.y, b.y); });
    for (const auto& r : found)
        for (const auto& part : r.sqfree) res.covered_degree += part.factor.total_degree();
    res.records = std::move(found);
    return res;
}

inline DiscoveryResult<RationalField> discover_fibers(const RationalMapInput<RationalField>&,
                                                      const MvPoly<RationalField>&, const DiscoveryOptions& = {})
{
    throw Error(Errc::RationalModeUnsupported, "fiber discovery samples over a prime field");
}

// ---------------------------------------------------------------------------
// the degree chain

template <class Field>
struct BoundChainReport
{
    std::vector<FiberRecord<Field>> fibers;
    std::int64_t sum_deg = 0;
    std::int64_t sum_weighted = 0;
    std::int64_t degF = 0;
    std::int64_t outer = 0;
    bool chain_ok = false;       ///< sum_deg <= sum_weighted <= degF <= outer
    bool witness_divides = false; ///< prod P_e^(2e-1) over all records divides F
    std::optional<std::int64_t> indeg_refined; ///< 3(d-1) - indeg(Syz)
    bool refined_ok = true;                    ///< degF <= indeg_refined when present
    std::vector<std::string> violations;
};

template <class Field>
BoundChainReport<Field> verify_bound_chain(const RationalMapInput<Field>& in, std::vector<FiberRecord<Field>> fibers,
                                           const MvPoly<Field>& F, std::optional<unsigned> indeg = std::nullopt)
{
    if (F.is_zero()) throw Error(Errc::AllMinorsZero, "F is zero; the chain does not apply");
    BoundChainReport<Field> rep;
    auto witness = MvPoly<Field>::one(in.field, in.nvars());
    for (const auto& r : fibers) {
        rep.sum_deg += r.deg_h;
        rep.sum_weighted += r.weighted_deg;
        for (const auto& part : r.sqfree) witness *= pow(part.factor, 2 * part.multiplicity - 1);
    }
    rep.fibers = std::move(fibers);
    rep.degF = F.total_degree();
    rep.outer = in.outer_bound();
    rep.witness_divides = divides(witness, F);
    if (rep.sum_deg > rep.sum_weighted) rep.violations.push_back("sum deg h_y <= sum (2e-1) deg h_i");
    if (rep.sum_weighted > rep.degF) rep.violations.push_back("sum (2e-1) deg h_i <= deg F");
    if (rep.degF > rep.outer) rep.violations.push_back("deg F <= 3(d-1)");
    rep.chain_ok = rep.violations.empty();
    if (!rep.witness_divides) rep.violations.push_back("prod h_i^(2e_i-1) divides F");
    if (indeg) {
        rep.indeg_refined = rep.outer - static_cast<std::int64_t>(*indeg);
        rep.refined_ok = rep.degF <= *rep.indeg_refined;
        if (!rep.refined_ok) rep.violations.push_back("deg F <= 3(d-1) - indeg(Syz(I))");
    }
    return rep;
}

/** Throws ChainViolation naming the first failed inequality. */
template <class Field>
void require_chain(const BoundChainReport<Field>& rep)
{
    if (!rep.violations.empty()) throw Error(Errc::ChainViolation, rep.violations.front());
}

// ---------------------------------------------------------------------------
// pointwise checks

struct TangentRank
{
    std::size_t rank_jacobian = 0;
    std::size_t rank_dphi = 0;
    bool consistent = false;
};

/** rank J(q) against the rank of the affine differential of phi at q, the
 * latter from the quotient-rule matrix (J_ij f_r - f_i J_rj) / f_r^2. */
template <class Field>
TangentRank tangent_rank_check(const RationalMapInput<Field>& in, const ProjectivePoint<Field>& q)
{
    const Field& K = in.field;
    if (q.coords.size() != in.nvars()) throw Error(Errc::BadPoint, "source point needs m + 1 coordinates");
    if (K.divides_count(in.d)) throw Error(Errc::CharDividesDegree, "characteristic divides d");
    auto qn = make_projective_point(K, q.coords);
    std::size_t chart = 0;
    while (K.is_zero(qn.coords[chart])) ++chart;
    std::span<const typename Field::value_type> x(qn.coords);
    auto fx = evaluate_forms(in, x);
    std::size_t r = 0;
    while (r <= in.n && K.is_zero(fx[r])) ++r;
    if (r > in.n) throw Error(Errc::BasePointError, "all forms vanish at " + to_string(K, qn));

    auto jq = evaluate_matrix(build_jacobian(in), x, K);
    TangentRank out;
    out.rank_jacobian = rank(jq);

    Matrix<Field> dphi(K, in.n, in.m);
    auto inv_sq = K.inv(K.mul(fx[r], fx[r]));
    std::size_t row = 0;
    for (std::size_t i = 0; i <= in.n; ++i) {
        if (i == r) continue;
        std::size_t col = 0;
        for (std::size_t j = 0; j <= in.m; ++j) {
            if (j == chart) continue;
            auto num = K.sub(K.mul(jq(i, j), fx[r]), K.mul(fx[i], jq(r, j)));
            dphi(row, col++) = K.mul(num, inv_sq);
        }
        ++row;
    }
    out.rank_dphi = rank(dphi);
    out.consistent = out.rank_jacobian == out.rank_dphi + 1;
    return out;
}

/** The square-free part of h divides every nonzero 3-minor exactly. */
template <class Field>
bool minor_vanishing_check(const RationalMapInput<Field>& in, const MvPoly<Field>& h)
{
    if (h.is_zero()) return false;
    if (h.is_constant()) return true;
    auto s = squarefree_part(h);
    for (const auto& mi : minors(build_jacobian(in), 3))
        if (!mi.value.is_zero() && !divides(s, mi.value)) return false;
    return true;
}

struct ContractionCheck
{
    std::size_t checked = 0;
    std::size_t mismatched = 0;
    bool ok() const { return checked > 0 && mismatched == 0; }
};

/** Samples points of Z(h) off the base locus and verifies phi(x) = y there. */
inline ContractionCheck contracted_check(const RationalMapInput<PrimeField>& in,
                                         const FiberRecord<PrimeField>& rec, std::size_t lines, std::uint64_t seed)
{
    ContractionCheck out;
    auto H = squarefree_part(rec.h);
    auto check = [&](auto const& ring, const auto& fx) {
        auto y = detail::rational_image(ring, fx);
        if (!y) return;
        ++out.checked;
        if (y->empty() || *y != rec.y.coords) ++out.mismatched;
    };
    visit_line_points(
        H, lines, seed, 2,
        [&](const std::vector<std::uint64_t>& x) {
            check(detail::SelfRing<PrimeField>(in.field), evaluate_forms(in, std::span<const std::uint64_t>(x)));
        },
        [&](const ExtensionField& E, const std::vector<UPoly>& x) {
            std::vector<UPoly> fx;
            for (const auto& fi : in.f) fx.push_back(evaluate_in(E, fi, std::span<const UPoly>(x)));
            check(E, fx);
        });
    return out;
}

} // namespace fiberbound
