#pragma once

/*
 * Built-in fixtures with pinned invariants, plus invariant suites run on
 * them.  `perturb` alters one coefficient of the Example 2 fixture so that
 * the pinned values must fail; it exists to prove the harness can fail.
 */

#include "fiberbound/report.hpp"

#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace fiberbound {

struct FixturePins
{
    std::string name;
    std::string text;
    std::int64_t degF = 0;
    std::int64_t sum_deg = 0;
    std::int64_t sum_weighted = 0;
    unsigned indeg = 0;
    std::optional<std::int64_t> refined;
    bool dependent = false;
};

inline std::string family_map_text(unsigned d)
{
    const std::string a = "(X0^2 - X1^2)", b = "(X1^2 - X2^2)";
    const std::string e = std::to_string(d - 3);
    return "# four-form family of degree " + std::to_string(d) + "\nvars X0 X1 X2\n" +
           "f0 X0^" + e + "*X1*" + a + "\n" +
           "f1 X0^" + e + "*X2*" + a + "\n" +
           "f2 X0^" + e + "*X2*" + b + "\n" +
           "f3 X1^" + e + "*X2*" + b + "\n";
}

inline std::string example2_map_text(bool perturb = false)
{
    return std::string("# sextic map with four contracted conics and lines\nvars X0 X1 X2\n") +
           "f0 X1^2*X2^4 - X1^4*X2^2\n"
           "f1 X0^4*X2^2 - X2^6\n"
           "f2 X0^2*X1^2*X2^2 - X0^2*X1^4\n" +
           (perturb ? "f3 2*X0^4*X1^2 - X1^2*X2^4\n" : "f3 X0^4*X1^2 - X1^2*X2^4\n");
}

inline std::string cube_map_text()
{
    return "# cubes with a linear relation among the forms\nvars X0 X1 X2\n"
           "f0 X0^3\nf1 X1^3\nf2 X2^3\nf3 X0^3 + X1^3\n";
}

inline std::vector<FixturePins> builtin_fixtures(bool perturb = false)
{
    std::vector<FixturePins> out;
    for (unsigned d = 4; d <= 7; ++d) {
        const auto dd = static_cast<std::int64_t>(d);
        out.push_back({"family_d" + std::to_string(d), family_map_text(d), 2 * (dd - 1), dd + 2, 2 * (dd - 1), 1,
                       3 * (dd - 1) - 1, false});
    }
    out.push_back({"example2", example2_map_text(perturb), 11, 8, 9, 2, 13, false});
    out.push_back({"cube", cube_map_text(), 6, 0, 0, 0, 6, true});
    return out;
}

struct SelftestCheck
{
    std::string suite;
    std::string name;
    bool ok = false;
    std::string detail;
};

struct FixtureRow
{
    std::string name;
    std::int64_t degF = 0, sum_deg = 0, sum_weighted = 0, indeg = -1;
    bool ok = false;
};

struct SelftestResult
{
    std::vector<FixtureRow> fixtures;
    std::vector<SelftestCheck> checks;

    bool passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.ok; });
    }
};

namespace detail {

inline void pin(SelftestResult& res, const std::string& suite, const std::string& what, std::int64_t expected,
                std::int64_t actual)
{
    res.checks.push_back({suite, what + " = " + std::to_string(expected), expected == actual,
                          "got " + std::to_string(actual)});
}

inline void flag(SelftestResult& res, const std::string& suite, const std::string& what, bool ok,
                 std::string detail = {})
{
    res.checks.push_back({suite, what, ok, std::move(detail)});
}

inline void invariant_suites(SelftestResult& res, const std::string& suite, const RationalMapInput<PrimeField>& in,
                             std::uint64_t seed)
{
    const PrimeField& K = in.field;
    std::mt19937_64 rng(seed);

    bool euler_ok = true;
    for (const auto& f : in.f) {
        auto lhs = MvPoly<PrimeField>(K, in.nvars());
        for (std::size_t j = 0; j < in.nvars(); ++j)
            lhs += MvPoly<PrimeField>::variable(K, in.nvars(), j) * partial_derivative(f, j);
        euler_ok = euler_ok && lhs == f.scaled(K.from_count(in.d));
    }
    flag(res, suite, "sum x_j df_i/dx_j = d f_i", euler_ok);

    auto jr = jacobian_report(in, derive_seed(seed, 0));
    if (in.m == 2 && in.n == 3) {
        auto e = euler_syzygy(in, jr.F);
        flag(res, suite, "Euler syzygy a_i = D_i / F satisfies sum a_i f_i = 0", e.verified,
             "delta " + std::to_string(e.delta));
    }

    Matrix<PrimeField> change(K, in.n + 1, in.n + 1);
    do {
        for (auto& v : change.data) v = K.from_int(static_cast<std::int64_t>(rng() % 7) - 3);
    } while (rank(change) != in.n + 1);
    flag(res, suite, "F is unchanged by an invertible change of target basis",
         fitting_invariance_check(in, change, derive_seed(seed, 1)));

    std::size_t consistent = 0, tried = 0;
    for (int i = 0; i < 25; ++i) {
        std::vector<std::uint64_t> q(in.nvars());
        for (auto& c : q) c = K.random(rng);
        try {
            ++tried;
            consistent += tangent_rank_check(in, make_projective_point(K, q)).consistent;
        } catch (const Error&) {
            --tried;
        }
    }
    flag(res, suite, "rank J(q) = rank dphi_q + 1 at random points", tried > 0 && consistent == tried,
         std::to_string(consistent) + " of " + std::to_string(tried));

    auto disc = discover_fibers(in, jr.F, {200, seed, 2});
    bool pivots_ok = true, minors_ok = true, contracted_ok = true;
    for (const auto& r : disc.records) {
        for (std::size_t i = 0; i <= in.n; ++i)
            if (!K.is_zero(r.y.coords[i])) pivots_ok = pivots_ok && fiber_equation(in, r.y, i).monic() == r.h;
        minors_ok = minors_ok && minor_vanishing_check(in, r.h);
        contracted_ok = contracted_ok && contracted_check(in, r, 20, derive_seed(seed, 2)).ok();
    }
    flag(res, suite, "h_y does not depend on the pivot coordinate", pivots_ok);
    flag(res, suite, "every 3-minor vanishes along each h_y", minors_ok);
    flag(res, suite, "sampled points of each h_y map to y", contracted_ok);
}

} // namespace detail

inline SelftestResult run_selftest(bool perturb = false, std::uint64_t seed = 42)
{
    SelftestResult res;
    for (const auto& fx : builtin_fixtures(perturb)) {
        auto mf = parse_map_text(fx.text);
        AnalyzeOptions opt;
        opt.seed = seed;
        auto rep = analyze(mf, opt);
        const std::size_t first = res.checks.size();
        detail::pin(res, fx.name, "deg F", fx.degF, rep.degF);
        detail::pin(res, fx.name, "sum deg h_y", fx.sum_deg, rep.sum_deg);
        detail::pin(res, fx.name, "sum (2e-1) deg h_i", fx.sum_weighted, rep.sum_weighted);
        detail::pin(res, fx.name, "indeg Syz", fx.indeg, rep.indeg ? static_cast<std::int64_t>(*rep.indeg) : -1);
        if (fx.refined) detail::pin(res, fx.name, "refined bound", *fx.refined, rep.refined.value_or(-1));
        detail::flag(res, fx.name, std::string("forms linearly ") + (fx.dependent ? "dependent" : "independent"),
                     rep.dependent == fx.dependent);
        detail::flag(res, fx.name, "deg F = 3(d-1) exactly when the forms are dependent",
                     (rep.degF == rep.outer) == rep.dependent);
        std::string why;
        for (const auto& v : rep.violations) why += (why.empty() ? "" : "; ") + v;
        detail::flag(res, fx.name, "bound chain and divisibility hold", rep.violations.empty(), why);
        FixtureRow row{fx.name, rep.degF, rep.sum_deg, rep.sum_weighted,
                       rep.indeg ? static_cast<std::int64_t>(*rep.indeg) : -1, true};
        for (std::size_t i = first; i < res.checks.size(); ++i) row.ok = row.ok && res.checks[i].ok;
        res.fixtures.push_back(row);
    }

    auto ex2 = load_prime_map(parse_map_text(example2_map_text(perturb)));
    detail::invariant_suites(res, "example2 invariants", ex2, seed);
    detail::invariant_suites(res, "family_d5 invariants", load_prime_map(parse_map_text(family_map_text(5))), seed);

    auto mq = parse_map_text(example2_map_text(perturb));
    mq.prime.reset();
    auto exq = load_map(mq, RationalField{});
    detail::pin(res, "example2 over QQ", "deg F", 11, jacobian_report(exq).degF);
    return res;
}

inline CommandOutput cmd_selftest(bool perturb, std::uint64_t seed = 42)
{
    auto res = run_selftest(perturb, seed);
    CommandOutput out;
    std::ostringstream os;
    Json checks = Json::array(), fixtures = Json::array();
    std::size_t failed = 0;
    os << "fixture        deg F  sum deg  sum weighted  indeg  status\n";
    for (const auto& f : res.fixtures) {
        char line[96];
        std::snprintf(line, sizeof line, "%-13s %6lld %8lld %13lld %6lld  %s\n", f.name.c_str(),
                      static_cast<long long>(f.degF), static_cast<long long>(f.sum_deg),
                      static_cast<long long>(f.sum_weighted), static_cast<long long>(f.indeg), f.ok ? "ok" : "FAILED");
        os << line;
        fixtures.push_back(Json{{"name", f.name}, {"degF", f.degF}, {"sumDeg", f.sum_deg},
                                {"sumWeighted", f.sum_weighted}, {"indegSyz", f.indeg}, {"ok", f.ok}});
    }
    os << '\n';
    for (const auto& c : res.checks) {
        os << (c.ok ? "PASS  " : "FAIL  ") << c.suite << ": " << c.name;
        if (!c.ok && !c.detail.empty()) os << "  (" << c.detail << ')';
        os << '\n';
        failed += !c.ok;
        checks.push_back(Json{{"suite", c.suite}, {"check", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    }
    os << (failed ? std::to_string(failed) + " of " + std::to_string(res.checks.size()) + " checks failed\n"
                  : "all " + std::to_string(res.checks.size()) + " checks passed\n");
    out.text = os.str();
    out.json = Json{{"passed", failed == 0}, {"failed", failed}, {"perturbed", perturb}, {"fixtures", fixtures}, {"checks", checks}};
    out.exit_code = failed ? 2 : 0;
    return out;
}

} // namespace fiberbound
