#pragma once

/*
 * The analysis pipeline behind the command-line tool, plus the text and JSON
 * renderings of its results.  JSON output uses insertion-ordered objects so
 * that a fixed (input, seed) pair yields byte-identical output.
 */

#include "fiberbound/fibers.hpp"
#include "fiberbound/jacobian.hpp"
#include "fiberbound/mapfile.hpp"
#include "fiberbound/syzygy.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fiberbound {

using Json = nlohmann::ordered_json;

struct CommandOutput
{
    std::string text;
    Json json;
    int exit_code = 0; ///< 0 ok, 2 a checked inequality or identity failed
};

inline std::string read_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(Errc::ParseError, "cannot open '" + path + "'");
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

/** Calls fn with the map loaded into the file's own field. */
template <class Fn>
decltype(auto) with_session(const MapFile& mf, Fn&& fn)
{
    if (mf.prime) return fn(load_map(mf, PrimeField(*mf.prime)));
    return fn(load_map(mf, RationalField{}));
}

/** Accepts "1,0,-1,0", "(1:0:-1:0)" or "1 0 -1 0"; entries may be a/b. */
template <class Field>
ProjectivePoint<Field> parse_point(const Field& field, std::string_view text, std::size_t expected)
{
    std::vector<typename Field::value_type> coords;
    std::string tok;
    auto flush = [&] {
        if (tok.empty()) return;
        try {
            coords.push_back(field.from_rational(BigRational(tok)));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error(Errc::BadPoint, "malformed coordinate '" + tok + "'");
        }
        tok.clear();
    };
    for (char c : text) {
        if (c == ',' || c == ':' || c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c)))
            flush();
        else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/')
            tok.push_back(c);
        else
            throw Error(Errc::BadPoint, "unexpected character '" + std::string(1, c) + "' in point");
    }
    flush();
    if (coords.size() != expected)
        throw Error(Errc::BadPoint,
                    "point has " + std::to_string(coords.size()) + " coordinates, expected " + std::to_string(expected));
    return make_projective_point(field, std::move(coords));
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions
{
    std::uint64_t seed = 42;
    std::size_t budget = 200;
    bool second_prime = false;
    int max_extension_degree = 2;
};

struct FiberSummary
{
    std::string y;
    std::string h;
    std::int64_t deg_h = 0;
    std::int64_t weighted = 0;
    std::vector<std::pair<std::string, unsigned>> parts;
};

struct AnalysisReport
{
    std::string field;
    std::optional<std::uint64_t> p;
    std::size_t m = 0, n = 0;
    unsigned d = 0;
    std::vector<std::string> forms;

    std::string F;
    std::int64_t degF = -1;
    bool i_top_nonzero = false;
    bool dependent = false;
    std::vector<std::string> relation;
    std::optional<unsigned> indeg;
    std::optional<bool> euler_verified;

    std::int64_t outer = 0;
    std::optional<std::int64_t> refined;
    std::vector<FiberSummary> fibers;
    std::int64_t sum_deg = 0;
    std::int64_t sum_weighted = 0;
    bool chain_ok = false;
    bool witness_divides = false;
    std::vector<std::string> violations;

    std::string discovery_field;
    std::int64_t covered_degree = 0;
    std::int64_t squarefree_degree_F = 0;
    std::size_t points_examined = 0;
    std::size_t images_tested = 0;
    std::size_t base_points_skipped = 0;

    std::optional<std::uint64_t> second_prime;
    std::optional<std::int64_t> second_degF;
    std::vector<std::string> warnings;
    std::uint64_t seed = 0;
    std::size_t budget = 0;

    int exit_code() const { return violations.empty() ? 0 : 2; }
};

namespace detail {

template <class Field>
std::vector<FiberSummary> summarize(const RationalMapInput<Field>& in, const std::vector<FiberRecord<Field>>& recs)
{
    std::vector<FiberSummary> out;
    for (const auto& r : recs) {
        FiberSummary s{to_string(in.field, r.y), to_string(r.h, in.names), r.deg_h, r.weighted_deg, {}};
        for (const auto& part : r.sqfree) s.parts.emplace_back(to_string(part.factor, in.names), part.multiplicity);
        out.push_back(std::move(s));
    }
    return out;
}

template <class Field>
void exact_invariants(const RationalMapInput<Field>& in, const JacobianReport<Field>& jr, AnalysisReport& rep)
{
    rep.m = in.m;
    rep.n = in.n;
    rep.d = in.d;
    rep.outer = in.outer_bound();
    for (const auto& f : in.f) rep.forms.push_back(to_string(f, in.names));
    rep.F = to_string(jr.F, in.names);
    rep.degF = jr.degF;
    rep.i_top_nonzero = jr.i_top_nonzero;

    auto dep = linear_dependence_check(in);
    rep.dependent = dep.dependent;
    if (dep.relation)
        for (const auto& c : *dep.relation) rep.relation.push_back(in.field.to_string(c));
    if (dep.dependent) rep.warnings.push_back("generators linearly dependent: deg F = 3(d-1) and indeg Syz = 0 are forced");
    if (!jr.i_top_nonzero) rep.warnings.push_back("generic fibers are not finite: the maximal minors vanish identically");

    rep.indeg = indeg_syzygy(in).indeg;
    if (in.m == 2 && in.n == 3) rep.euler_verified = euler_syzygy(in, jr.F).verified;
}

inline void discover_and_chain(const RationalMapInput<PrimeField>& in, const MvPoly<PrimeField>& F,
                               const AnalyzeOptions& opt, AnalysisReport& rep)
{
    auto disc = discover_fibers(in, F, {opt.budget, opt.seed, opt.max_extension_degree});
    std::optional<unsigned> indeg;
    if (in.m == 2 && in.n == 3) indeg = rep.indeg;
    auto chain = verify_bound_chain(in, disc.records, F, indeg);
    rep.discovery_field = in.field.name();
    rep.fibers = summarize(in, chain.fibers);
    rep.sum_deg = chain.sum_deg;
    rep.sum_weighted = chain.sum_weighted;
    rep.chain_ok = chain.chain_ok;
    rep.witness_divides = chain.witness_divides;
    rep.refined = chain.indeg_refined;
    rep.violations = chain.violations;
    rep.covered_degree = disc.covered_degree;
    rep.squarefree_degree_F = disc.squarefree_degree_F;
    rep.points_examined = disc.points_examined;
    rep.images_tested = disc.images_tested;
    rep.base_points_skipped = disc.base_points_skipped;
    if (disc.covered_degree < disc.squarefree_degree_F)
        rep.warnings.push_back("components of F of total degree " +
                               std::to_string(disc.squarefree_degree_F - disc.covered_degree) +
                               " carry no discovered fiber");
    if (rep.euler_verified && !*rep.euler_verified) rep.violations.push_back("sum a_i f_i = 0 with a_i = D_i / F");
}

inline void second_prime_check(const MapFile& mf, std::uint64_t p, std::int64_t degF, std::uint64_t seed,
                               AnalysisReport& rep)
{
    auto q = previous_prime(p);
    rep.second_prime = q;
    try {
        auto in2 = load_map(mf, PrimeField(q));
        auto jr2 = jacobian_report(in2, derive_seed(seed, 0));
        rep.second_degF = jr2.degF;
        if (jr2.degF != degF)
            rep.warnings.push_back("deg F is " + std::to_string(jr2.degF) + " modulo " + std::to_string(q) +
                                   " but " + std::to_string(degF) + " in the session field; one prime is unlucky");
    } catch (const Error& e) {
        rep.warnings.push_back("reduction modulo " + std::to_string(q) + " failed: " + e.what());
    }
}

} // namespace detail

inline AnalysisReport analyze(const MapFile& mf, const AnalyzeOptions& opt = {})
{
    AnalysisReport rep;
    rep.seed = opt.seed;
    rep.budget = opt.budget;
    rep.p = mf.prime;
    const std::uint64_t jac_seed = derive_seed(opt.seed, 0);

    if (mf.prime) {
        auto in = load_map(mf, PrimeField(*mf.prime));
        rep.field = in.field.name();
        auto jr = jacobian_report(in, jac_seed);
        if (!jr.i3_nonzero) throw Error(Errc::AllMinorsZero, "every 3-minor of J(f) vanishes; F is undefined");
        detail::exact_invariants(in, jr, rep);
        detail::discover_and_chain(in, jr.F, opt, rep);
        if (opt.second_prime) detail::second_prime_check(mf, *mf.prime, rep.degF, opt.seed, rep);
        return rep;
    }

    auto in = load_map(mf, RationalField{});
    rep.field = in.field.name();
    auto jr = jacobian_report(in, jac_seed);
    if (!jr.i3_nonzero) throw Error(Errc::AllMinorsZero, "every 3-minor of J(f) vanishes; F is undefined");
    detail::exact_invariants(in, jr, rep);

    const std::uint64_t p = PrimeField::kDefaultPrime;
    try {
        auto inp = load_map(mf, PrimeField(p));
        auto jrp = jacobian_report(inp, jac_seed);
        rep.warnings.push_back("fibers were discovered on the reduction modulo " + std::to_string(p));
        if (jrp.degF != jr.degF)
            rep.warnings.push_back("deg F drops from " + std::to_string(jr.degF) + " to " + std::to_string(jrp.degF) +
                                   " modulo " + std::to_string(p));
        auto exact = rep.degF;
        detail::discover_and_chain(inp, jrp.F, opt, rep);
        rep.degF = exact;
        if (opt.second_prime) detail::second_prime_check(mf, p, rep.degF, opt.seed, rep);
    } catch (const Error& e) {
        rep.warnings.push_back("no fiber discovery: reduction modulo " + std::to_string(p) + " failed: " + e.what());
        rep.discovery_field = "none";
        rep.sum_deg = rep.sum_weighted = 0;
        rep.chain_ok = rep.degF <= rep.outer;
        rep.witness_divides = true;
        if (!rep.chain_ok) rep.violations.push_back("deg F <= 3(d-1)");
    }
    return rep;
}

inline Json to_json(const AnalysisReport& r)
{
    Json j;
    j["m"] = r.m;
    j["n"] = r.n;
    j["d"] = r.d;
    j["field"] = r.field;
    j["p"] = r.p ? Json(*r.p) : Json(nullptr);
    j["forms"] = r.forms;
    j["F"] = r.F;
    j["degF"] = r.degF;
    j["outerBound"] = r.outer;
    j["indegSyz"] = r.indeg ? Json(*r.indeg) : Json(nullptr);
    j["refinedBound"] = r.refined ? Json(*r.refined) : Json(nullptr);
    j["linearlyDependent"] = r.dependent;
    j["relation"] = r.relation;
    j["finiteGenericFibers"] = r.i_top_nonzero;
    j["eulerSyzygyVerified"] = r.euler_verified ? Json(*r.euler_verified) : Json(nullptr);
    Json fibers = Json::array();
    for (const auto& f : r.fibers) {
        Json parts = Json::array();
        for (const auto& [factor, e] : f.parts) parts.push_back(Json{{"factor", factor}, {"multiplicity", e}});
        fibers.push_back(Json{{"y", f.y}, {"h", f.h}, {"degH", f.deg_h}, {"weightedDeg", f.weighted}, {"squarefree", parts}});
    }
    j["fibers"] = fibers;
    j["sumDeg"] = r.sum_deg;
    j["sumWeighted"] = r.sum_weighted;
    j["chainOk"] = r.chain_ok;
    j["witnessDivides"] = r.witness_divides;
    j["violations"] = r.violations;
    j["coverage"] = Json{{"discoveryField", r.discovery_field},
                         {"coveredDegree", r.covered_degree},
                         {"squarefreeDegreeF", r.squarefree_degree_F},
                         {"pointsExamined", r.points_examined},
                         {"imagesTested", r.images_tested},
                         {"basePointsSkipped", r.base_points_skipped}};
    if (r.second_prime) j["secondPrime"] = Json{{"p", *r.second_prime}, {"degF", r.second_degF ? Json(*r.second_degF) : Json(nullptr)}};
    j["warnings"] = r.warnings;
    j["seed"] = r.seed;
    j["budget"] = r.budget;
    return j;
}

inline std::string to_text(const AnalysisReport& r)
{
    std::ostringstream os;
    os << "map            P^" << r.m << " -> P^" << r.n << ", d = " << r.d << ", over " << r.field << '\n';
    for (std::size_t i = 0; i < r.forms.size(); ++i) os << "  f" << i << " = " << r.forms[i] << '\n';
    os << "F              " << r.F << '\n';
    os << "deg F          " << r.degF << "   (3(d-1) = " << r.outer << ")\n";
    os << "indeg Syz      " << (r.indeg ? std::to_string(*r.indeg) : "none") << '\n';
    if (r.refined) os << "refined bound  " << *r.refined << '\n';
    if (r.euler_verified) os << "Euler syzygy   " << (*r.euler_verified ? "verified" : "FAILED") << '\n';
    os << "fibers         " << r.fibers.size() << " found over " << r.discovery_field << '\n';
    for (const auto& f : r.fibers) {
        os << "  y = " << f.y << "  h = " << f.h << "  deg " << f.deg_h << ", weighted " << f.weighted;
        if (!(f.parts.size() == 1 && f.parts[0].second == 1)) {
            os << "  [";
            for (std::size_t i = 0; i < f.parts.size(); ++i)
                os << (i ? ", " : "") << '(' << f.parts[i].first << ")^" << f.parts[i].second;
            os << ']';
        }
        os << '\n';
    }
    os << "chain          " << r.sum_deg << " <= " << r.sum_weighted << " <= " << r.degF << " <= " << r.outer
       << (r.chain_ok ? "   holds" : "   VIOLATED") << '\n';
    if (r.refined)
        os << "refined chain  " << r.sum_deg << " <= " << r.degF << " <= " << *r.refined << " <= " << r.outer
           << (r.degF <= *r.refined ? "   holds" : "   VIOLATED") << '\n';
    os << "witness        prod h_i^(2e_i-1) " << (r.witness_divides ? "divides" : "does NOT divide") << " F\n";
    os << "coverage       " << r.covered_degree << " of " << r.squarefree_degree_F
       << " in deg F_red; " << r.points_examined << " points, " << r.images_tested << " images, "
       << r.base_points_skipped << " base points\n";
    if (r.second_prime)
        os << "second prime   " << *r.second_prime << ": deg F = "
           << (r.second_degF ? std::to_string(*r.second_degF) : "n/a") << '\n';
    for (const auto& v : r.violations) os << "violation: " << v << '\n';
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
    os << "seed " << r.seed << ", budget " << r.budget << '\n';
    return os.str();
}

inline CommandOutput cmd_analyze(const MapFile& mf, const AnalyzeOptions& opt)
{
    auto rep = analyze(mf, opt);
    return {to_text(rep), to_json(rep), rep.exit_code()};
}

// ---------------------------------------------------------------------------
// fiber

inline CommandOutput cmd_fiber(const MapFile& mf, std::string_view point, std::uint64_t seed = 42)
{
    return with_session(mf, [&](const auto& in) {
        auto y = parse_point(in.field, point, in.n + 1);
        auto rec = make_fiber_record(y, fiber_equation(in, y));
        CommandOutput out;
        std::ostringstream os;
        os << "y              " << to_string(in.field, rec.y) << '\n';
        os << "h_y            " << to_string(rec.h, in.names) << '\n';
        os << "deg h_y        " << rec.deg_h << '\n';
        os << "weighted deg   " << rec.weighted_deg << '\n';
        Json parts = Json::array();
        for (const auto& part : rec.sqfree) {
            os << "  (" << to_string(part.factor, in.names) << ")^" << part.multiplicity << '\n';
            parts.push_back(Json{{"factor", to_string(part.factor, in.names)}, {"multiplicity", part.multiplicity}});
        }
        out.json = Json{{"y", to_string(in.field, rec.y)},
                        {"h", to_string(rec.h, in.names)},
                        {"degH", rec.deg_h},
                        {"weightedDeg", rec.weighted_deg},
                        {"squarefree", parts}};
        if (!rec.h.is_constant()) {
            bool divides_minors = minor_vanishing_check(in, rec.h);
            os << "minors         " << (divides_minors ? "every 3-minor vanishes on h_y" : "a 3-minor is nonzero on h_y") << '\n';
            out.json["minorsVanish"] = divides_minors;
            if (!divides_minors) out.exit_code = 2;
            if constexpr (std::is_same_v<std::decay_t<decltype(in.field)>, PrimeField>) {
                auto cc = contracted_check(in, rec, 20, seed);
                os << "contracted     " << cc.checked - cc.mismatched << " of " << cc.checked << " sampled points map to y\n";
                out.json["contraction"] = Json{{"checked", cc.checked}, {"mismatched", cc.mismatched}};
                if (cc.mismatched) out.exit_code = 2;
            }
        }
        out.text = os.str();
        return out;
    });
}

// ---------------------------------------------------------------------------
// syzygy

inline CommandOutput cmd_syzygy(const MapFile& mf, std::optional<unsigned> max_degree)
{
    return with_session(mf, [&](const auto& in) {
        CommandOutput out;
        std::ostringstream os;
        const unsigned cap = max_degree.value_or(in.d);
        Json dims = Json::array();
        std::optional<unsigned> indeg;
        Json basis = Json::array();
        for (unsigned nu = 0; nu <= cap; ++nu) {
            auto k = graded_syzygy_kernel(in, nu);
            os << "dim Syz_" << nu << " = " << k.dimension << '\n';
            dims.push_back(k.dimension);
            if (!indeg && k.dimension > 0) {
                indeg = nu;
                for (const auto& tuple : k.basis) {
                    Json t = Json::array();
                    os << "  (";
                    for (std::size_t i = 0; i < tuple.size(); ++i) {
                        os << (i ? ", " : "") << to_string(tuple[i], in.names);
                        t.push_back(to_string(tuple[i], in.names));
                    }
                    os << ")\n";
                    basis.push_back(t);
                }
            }
        }
        os << "indeg Syz      " << (indeg ? std::to_string(*indeg) : "none up to " + std::to_string(cap)) << '\n';
        out.json = Json{{"dimensions", dims}, {"indegSyz", indeg ? Json(*indeg) : Json(nullptr)}, {"basis", basis}};

        if (in.m == 2 && in.n == 3) {
            auto jr = jacobian_report(in);
            if (jr.i3_nonzero) {
                auto e = euler_syzygy(in, jr.F);
                os << "Euler syzygy   degree " << e.delta << ", " << (e.verified ? "verified" : "FAILED") << '\n';
                for (std::size_t i = 0; i < 4; ++i) os << "  a" << i << " = " << to_string(e.a[i], in.names) << '\n';
                Json a = Json::array();
                for (const auto& ai : e.a) a.push_back(to_string(ai, in.names));
                out.json["euler"] = Json{{"delta", e.delta}, {"verified", e.verified}, {"a", a}};
                if (!e.verified) out.exit_code = 2;
                if (indeg && static_cast<std::int64_t>(*indeg) > e.delta) {
                    os << "violation: indeg Syz exceeds the Euler syzygy degree\n";
                    out.exit_code = 2;
                }
            }
        }
        out.text = os.str();
        return out;
    });
}

// ---------------------------------------------------------------------------
// rank-check

inline CommandOutput cmd_rank_check(const MapFile& mf, std::string_view point)
{
    return with_session(mf, [&](const auto& in) {
        auto q = parse_point(in.field, point, in.nvars());
        auto tr = tangent_rank_check(in, q);
        CommandOutput out;
        std::ostringstream os;
        os << "q              " << to_string(in.field, q) << '\n';
        os << "rank J(f)(q)   " << tr.rank_jacobian << '\n';
        os << "rank dphi_q    " << tr.rank_dphi << '\n';
        os << (tr.consistent ? "consistent: rank J = rank dphi + 1\n" : "violation: rank J != rank dphi + 1\n");
        out.text = os.str();
        out.json = Json{{"q", to_string(in.field, q)},
                        {"rankJacobian", tr.rank_jacobian},
                        {"rankDphi", tr.rank_dphi},
                        {"consistent", tr.consistent}};
        out.exit_code = tr.consistent ? 0 : 2;
        return out;
    });
}

} // namespace fiberbound
