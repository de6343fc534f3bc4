#pragma once

/*
 * Rational maps P^m --> P^n given by forms f_0..f_n of a common degree d,
 * their Jacobian matrix, its minors, and F = gcd of the 3-minors.
 */

#include "fiberbound/errors.hpp"
#include "fiberbound/gcd.hpp"
#include "fiberbound/linalg.hpp"
#include "fiberbound/mvpoly.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fiberbound {

template <class Field>
struct RationalMapInput
{
    Field field;
    std::size_t m = 0; ///< source P^m, so m + 1 variables
    std::size_t n = 0; ///< target P^n, so n + 1 forms
    unsigned d = 0;
    std::vector<MvPoly<Field>> f;
    std::vector<std::string> names;

    std::size_t nvars() const { return m + 1; }
    unsigned outer_bound() const { return 3 * (d - 1); }
};

/** Validates and packages the forms.  Linear dependence is allowed here; see
 * linear_dependence_check. */
template <class Field>
RationalMapInput<Field> make_rational_map(std::vector<MvPoly<Field>> f, std::vector<std::string> names = {})
{
    if (f.size() < 2) throw Error(Errc::ArityMismatch, "a rational map needs at least two forms");
    const Field field = f.front().field();
    const std::size_t nvars = f.front().nvars();
    if (nvars < 2) throw Error(Errc::ArityMismatch, "the source needs at least two variables");
    for (const auto& fi : f) MvPoly<Field>::check_compatible(f.front(), fi);
    if (names.empty()) names = default_variable_names(nvars);
    if (names.size() != nvars) throw Error(Errc::ArityMismatch, "variable name count differs from arity");

    std::optional<std::int64_t> degree;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i].is_zero()) continue;
        if (!f[i].is_homogeneous()) throw Error(Errc::NotHomogeneous, "f" + std::to_string(i) + " is not homogeneous");
        if (degree && *degree != f[i].total_degree())
            throw Error(Errc::MixedDegrees, "f" + std::to_string(i) + " has degree " +
                                                std::to_string(f[i].total_degree()) + ", expected " +
                                                std::to_string(*degree));
        degree = f[i].total_degree();
    }
    if (!degree) throw Error(Errc::NotHomogeneous, "all forms are zero");
    if (*degree < 1) throw Error(Errc::MixedDegrees, "forms must have positive degree");
    if (field.divides_count(static_cast<std::uint64_t>(*degree)))
        throw Error(Errc::CharDividesDegree, "characteristic " + std::to_string(field.characteristic()) +
                                                 " divides d = " + std::to_string(*degree));

    auto g = gcd(std::span<const MvPoly<Field>>(f));
    if (!g.is_constant()) throw Error(Errc::CommonFactor, "forms share the factor " + to_string(g, names));

    RationalMapInput<Field> in{field, nvars - 1, f.size() - 1, static_cast<unsigned>(*degree), std::move(f),
                               std::move(names)};
    return in;
}

template <class Field>
using PolyMatrix = std::vector<std::vector<MvPoly<Field>>>;

template <class Field>
PolyMatrix<Field> build_jacobian(const RationalMapInput<Field>& in)
{
    PolyMatrix<Field> jac(in.n + 1);
    for (std::size_t i = 0; i <= in.n; ++i)
        for (std::size_t j = 0; j <= in.m; ++j) jac[i].push_back(partial_derivative(in.f[i], j));
    return jac;
}

/** Determinant of the submatrix on `rows` x `cols`, by cofactor expansion along the first row. */
template <class Field>
MvPoly<Field> determinant(const PolyMatrix<Field>& a, std::span<const std::size_t> rows,
                          std::span<const std::size_t> cols)
{
    const auto& proto = a.at(rows[0]).at(cols[0]);
    if (rows.size() == 1) return proto;
    if (rows.size() == 2)
        return a[rows[0]][cols[0]] * a[rows[1]][cols[1]] - a[rows[0]][cols[1]] * a[rows[1]][cols[0]];
    MvPoly<Field> det(proto.field(), proto.nvars());
    std::vector<std::size_t> sub_cols;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const auto& entry = a[rows[0]][cols[k]];
        if (entry.is_zero()) continue;
        sub_cols.clear();
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (c != k) sub_cols.push_back(cols[c]);
        auto cof = entry * determinant(a, rows.subspan(1), std::span<const std::size_t>(sub_cols));
        if (k % 2 == 0)
            det += cof;
        else
            det -= cof;
    }
    return det;
}

template <class Field>
struct Minor
{
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    MvPoly<Field> value;
};

namespace detail {
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    if (k > n) return out;
    for (;;) {
        out.push_back(cur);
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}
} // namespace detail

/** All s-minors, zero ones included, with strictly increasing index sets. */
template <class Field>
std::vector<Minor<Field>> minors(const PolyMatrix<Field>& jac, std::size_t s)
{
    const std::size_t rows = jac.size(), cols = rows ? jac[0].size() : 0;
    if (s < 1 || s > std::min(rows, cols))
        throw Error(Errc::SOutOfRange, "s = " + std::to_string(s) + " outside [1, " +
                                           std::to_string(std::min(rows, cols)) + "]");
    std::vector<Minor<Field>> out;
    for (const auto& r : detail::subsets(rows, s))
        for (const auto& c : detail::subsets(cols, s)) out.push_back({r, c, determinant<Field>(jac, r, c)});
    return out;
}

/** gcd of the nonzero minors, accumulated in a seeded random order with early exit at 1. */
template <class Field>
MvPoly<Field> gcd_of_minors(std::span<const MvPoly<Field>> values, std::uint64_t seed = 0)
{
    std::vector<const MvPoly<Field>*> nz;
    for (const auto& v : values)
        if (!v.is_zero()) nz.push_back(&v);
    if (nz.empty()) throw Error(Errc::AllMinorsZero, "I_3(J(f)) = 0; the degree bound does not apply");
    std::mt19937_64 rng(seed);
    std::shuffle(nz.begin(), nz.end(), rng);
    auto g = nz.front()->monic();
    for (std::size_t i = 1; i < nz.size() && !g.is_constant(); ++i) g = gcd(g, *nz[i]);
    return g;
}

template <class Field>
MvPoly<Field> gcd_of_minors(const std::vector<Minor<Field>>& ms, std::uint64_t seed = 0)
{
    std::vector<MvPoly<Field>> values;
    for (const auto& m : ms) values.push_back(m.value);
    return gcd_of_minors(std::span<const MvPoly<Field>>(values), seed);
}

struct FinitenessFlags
{
    bool i_top_nonzero = false; ///< I_{m+1}(J(f)) != 0
    bool i3_nonzero = false;
};

template <class Field>
Matrix<Field> evaluate_matrix(const PolyMatrix<Field>& a, std::span<const typename Field::value_type> point,
                              const Field& field)
{
    Matrix<Field> out(field, a.size(), a.empty() ? 0 : a[0].size());
    for (std::size_t i = 0; i < out.rows; ++i)
        for (std::size_t j = 0; j < out.cols; ++j) out(i, j) = evaluate(a[i][j], point);
    return out;
}

/** Nonvanishing of I_{m+1} and I_3, by ranks of J at random points with a
 * symbolic fallback when every sample is degenerate. */
template <class Field>
FinitenessFlags generic_finiteness_check(const RationalMapInput<Field>& in, std::uint64_t seed = 0,
                                         unsigned trials = 8)
{
    FinitenessFlags flags;
    const std::size_t top = in.m + 1;
    const bool top_exists = top <= in.n + 1;
    const bool three_exists = 3 <= std::min(in.m + 1, in.n + 1);
    auto jac = build_jacobian(in);
    std::mt19937_64 rng(seed);
    for (unsigned t = 0; t < trials; ++t) {
        std::vector<typename Field::value_type> pt;
        for (std::size_t j = 0; j <= in.m; ++j) pt.push_back(in.field.random(rng));
        auto r = rank(evaluate_matrix(jac, std::span<const typename Field::value_type>(pt), in.field));
        if (three_exists && r >= 3) flags.i3_nonzero = true;
        if (top_exists && r >= top) flags.i_top_nonzero = true;
    }
    auto any_nonzero = [&](std::size_t s) {
        for (const auto& mi : minors(jac, s))
            if (!mi.value.is_zero()) return true;
        return false;
    };
    if (three_exists && !flags.i3_nonzero) flags.i3_nonzero = any_nonzero(3);
    if (top_exists && !flags.i_top_nonzero) flags.i_top_nonzero = any_nonzero(top);
    return flags;
}

template <class Field>
struct JacobianReport
{
    PolyMatrix<Field> jac;
    std::vector<Minor<Field>> minors3; ///< nonzero 3-minors only
    MvPoly<Field> F;                   ///< zero when I_3 = 0
    std::int64_t degF = -1;
    bool i3_nonzero = false;
    bool i_top_nonzero = false;
};

template <class Field>
JacobianReport<Field> jacobian_report(const RationalMapInput<Field>& in, std::uint64_t seed = 0)
{
    JacobianReport<Field> rep;
    rep.jac = build_jacobian(in);
    rep.F = MvPoly<Field>(in.field, in.nvars());
    auto flags = generic_finiteness_check(in, seed);
    rep.i_top_nonzero = flags.i_top_nonzero;
    if (std::min(in.m, in.n) >= 2) {
        for (auto& mi : minors(rep.jac, 3))
            if (!mi.value.is_zero()) rep.minors3.push_back(std::move(mi));
    }
    rep.i3_nonzero = !rep.minors3.empty();
    if (rep.i3_nonzero) {
        rep.F = gcd_of_minors(rep.minors3, seed);
        rep.degF = rep.F.total_degree();
    }
    return rep;
}

template <class Field>
struct EulerSyzygy
{
    std::array<MvPoly<Field>, 4> D; ///< signed 3-minors, row i deleted
    std::array<MvPoly<Field>, 4> a; ///< D_i / F
    std::int64_t delta = 0;         ///< 3(d-1) - deg F
    bool verified = false;          ///< sum a_i f_i == 0 recomputed
};

/** The syzygy (D_0, .., D_3) / F of a surface map P^2 --> P^3. */
template <class Field>
EulerSyzygy<Field> euler_syzygy(const RationalMapInput<Field>& in, const MvPoly<Field>& F)
{
    if (in.m != 2 || in.n != 3) throw Error(Errc::ArityMismatch, "the Euler syzygy is built for maps P^2 --> P^3");
    if (in.field.divides_count(in.d)) throw Error(Errc::CharDividesDegree, "characteristic divides d");
    if (F.is_zero()) throw Error(Errc::AllMinorsZero, "F is zero");
    auto jac = build_jacobian(in);
    EulerSyzygy<Field> syz;
    const std::array<std::size_t, 3> cols{0, 1, 2};
    auto sum = MvPoly<Field>(in.field, in.nvars());
    for (std::size_t i = 0; i < 4; ++i) {
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < 4; ++r)
            if (r != i) rows.push_back(r);
        auto det = determinant<Field>(jac, rows, cols);
        syz.D[i] = (i % 2 == 0) ? det : -det;
        auto q = try_exact_div(syz.D[i], F);
        if (!q) throw Error(Errc::FDoesNotDivideMinor, "F does not divide D_" + std::to_string(i));
        syz.a[i] = std::move(*q);
        sum += syz.a[i] * in.f[i];
    }
    syz.delta = static_cast<std::int64_t>(in.outer_bound()) - F.total_degree();
    syz.verified = sum.is_zero();
    return syz;
}

template <class Field>
struct LinearDependence
{
    bool dependent = false;
    std::size_t rank = 0;
    std::optional<std::vector<typename Field::value_type>> relation; ///< first nonzero entry is 1
};

/** Rank of the coefficient matrix of f_0..f_n and, if deficient, one relation. */
template <class Field>
LinearDependence<Field> linear_dependence_check(const RationalMapInput<Field>& in)
{
    std::vector<Monomial> monos;
    for (const auto& fi : in.f)
        for (const auto& t : fi.terms()) monos.push_back(t.monomial);
    std::sort(monos.begin(), monos.end(), [](const Monomial& a, const Monomial& b) { return a > b; });
    monos.erase(std::unique(monos.begin(), monos.end()), monos.end());
    Matrix<Field> mat(in.field, monos.size(), in.n + 1);
    for (std::size_t i = 0; i <= in.n; ++i)
        for (const auto& t : in.f[i].terms()) {
            auto it = std::lower_bound(monos.begin(), monos.end(), t.monomial,
                                       [](const Monomial& a, const Monomial& b) { return a > b; });
            mat(static_cast<std::size_t>(it - monos.begin()), i) = t.coeff;
        }
    LinearDependence<Field> out;
    auto ker = kernel_basis(mat);
    out.rank = in.n + 1 - ker.size();
    out.dependent = !ker.empty();
    if (out.dependent) {
        auto v = ker.front();
        std::size_t lead = 0;
        while (in.field.is_zero(v[lead])) ++lead;
        auto inv = in.field.inv(v[lead]);
        for (auto& x : v) x = in.field.mul(x, inv);
        out.relation = std::move(v);
    }
    return out;
}

/** g = change * f, i.e. g_i = sum_j change(i, j) f_j. */
template <class Field>
std::vector<MvPoly<Field>> apply_change(const RationalMapInput<Field>& in, const Matrix<Field>& change)
{
    std::vector<MvPoly<Field>> g;
    for (std::size_t i = 0; i <= in.n; ++i) {
        MvPoly<Field> gi(in.field, in.nvars());
        for (std::size_t j = 0; j <= in.n; ++j) gi += in.f[j].scaled(change(i, j));
        g.push_back(std::move(gi));
    }
    return g;
}

/** Recomputes F after an invertible change of basis of the forms and
 * compares with the original, both normalized. */
template <class Field>
bool fitting_invariance_check(const RationalMapInput<Field>& in, const Matrix<Field>& change, std::uint64_t seed = 0)
{
    if (change.rows != in.n + 1 || change.cols != in.n + 1)
        throw Error(Errc::SingularChange, "change of basis must be (n+1) x (n+1)");
    if (rank(change) != in.n + 1) throw Error(Errc::SingularChange, "change of basis is not invertible");
    auto before = jacobian_report(in, seed);
    auto other = make_rational_map(apply_change(in, change), in.names);
    auto after = jacobian_report(other, seed);
    if (!before.i3_nonzero || !after.i3_nonzero) return before.i3_nonzero == after.i3_nonzero;
    return before.F.monic() == after.F.monic();
}

} // namespace fiberbound
