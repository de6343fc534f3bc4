#include "fiberbound/mapfile.hpp"
#include "fiberbound/report.hpp"
#include "fiberbound/selftest.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <random>
#include <sys/wait.h>

using namespace fiberbound;
using testing_support::P;

namespace {

const std::string kFixtures = FIBERBOUND_FIXTURE_DIR;

Error parse_failure(const std::string& text)
{
    try {
        parse_map_file(text);
    } catch (const Error& e) {
        return e;
    }
    ADD_FAILURE() << "parsed without error:\n" << text;
    return Error(Errc::ParseError, "none");
}

struct Run
{
    int status = -1;
    std::string out;
};

Run run_cli(const std::string& args)
{
    Run r;
    std::string cmd = std::string(FIBERBOUND_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

} // namespace

TEST(MapFile, Example2Parses)
{
    auto mf = parse_map_file(read_file(kFixtures + "/example2.map"));
    EXPECT_EQ(mf.prime, PrimeField::kDefaultPrime);
    auto in = load_prime_map(mf);
    EXPECT_EQ(in.m, 2u);
    EXPECT_EQ(in.n, 3u);
    EXPECT_EQ(in.d, 6u);
    EXPECT_EQ(in.f[3], P("X0^4*X1^2 - X1^2*X2^4"));
}

TEST(MapFile, FixtureFilesMatchBuiltins)
{
    for (const auto& fx : builtin_fixtures()) {
        auto file = parse_map_file(read_file(kFixtures + "/" + fx.name + ".map"));
        auto builtin = parse_map_text(fx.text);
        EXPECT_EQ(file.forms, builtin.forms) << fx.name;
    }
}

TEST(MapFile, TrailingOperatorIsParseError)
{
    auto e = parse_failure("vars X0 X1 X2\nf0 X0^2 +\nf1 X1^2\n");
    EXPECT_EQ(e.code(), Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2, column 10"), std::string::npos) << e.what();
}

TEST(MapFile, SyntaxErrorsCarryPositions)
{
    EXPECT_NE(std::string(parse_failure("vars X0 X1\nf0 X0*Y1\nf1 X1\n").what()).find("undeclared variable 'Y1'"),
              std::string::npos);
    EXPECT_NE(std::string(parse_failure("vars X0 X1\nf1 X0\n").what()).find("expected label f0"), std::string::npos);
    EXPECT_NE(std::string(parse_failure("vars X0 X1\nf0 (X0 + X1\nf1 X1\n").what()).find("expected ')'"),
              std::string::npos);
    EXPECT_NE(std::string(parse_failure("field p=15\nvars X0 X1\nf0 X0\nf1 X1\n").what()).find("InvalidField"),
              std::string::npos);
    EXPECT_NE(std::string(parse_failure("vars X0 X1\nf0 X0 X1\nf1 X1\n").what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(parse_failure("bogus 1\n").what()).find("unknown directive"), std::string::npos);
}

TEST(MapFile, ValidationErrors)
{
    auto cf = parse_failure("vars X0 X1\nf0 X0^2\nf1 X0*X1\n");
    EXPECT_EQ(cf.code(), Errc::CommonFactor);
    EXPECT_NE(std::string(cf.what()).find("X0"), std::string::npos);
    EXPECT_EQ(parse_failure("vars X0 X1\nf0 X0^2 + X1\nf1 X1^2\n").code(), Errc::NotHomogeneous);
    EXPECT_EQ(parse_failure("vars X0 X1\nf0 X0^2\nf1 X1^3\n").code(), Errc::MixedDegrees);
    EXPECT_EQ(parse_failure("field p=5\nvars X0 X1\nf0 X0^5\nf1 X1^5\n").code(), Errc::CharDividesDegree);
}

TEST(MapFile, RationalMode)
{
    auto mf = parse_map_file(read_file(kFixtures + "/example2_rational.map"));
    EXPECT_FALSE(mf.prime.has_value());
    EXPECT_EQ(load_map(mf, RationalField{}).d, 6u);
}

TEST(MapFile, PrintRoundTrip)
{
    std::mt19937_64 rng(31);
    PrimeField K;
    auto monos = std::vector<std::string>{"X0^3", "X1^3", "X2^3", "X0^2*X1", "X0*X1*X2", "X1*X2^2"};
    for (int t = 0; t < 25; ++t) {
        std::vector<MvPoly<PrimeField>> f;
        for (int i = 0; i < 4; ++i) {
            auto g = MvPoly<PrimeField>(K, 3);
            for (const auto& m : monos) g += P(m).scaled(K.from_int(static_cast<std::int64_t>(rng() % 41) - 20));
            f.push_back(g);
        }
        RationalMapInput<PrimeField> in;
        try {
            in = make_rational_map(f, default_variable_names(3));
        } catch (const Error&) {
            continue;
        }
        auto back = load_prime_map(parse_map_file(print_map(in)));
        EXPECT_EQ(back.f, in.f);
        EXPECT_EQ(print_map(back), print_map(in));
    }
}

TEST(Points, Parsing)
{
    PrimeField K;
    EXPECT_EQ(parse_point(K, "1,0,-1,0", 4).coords, (std::vector<std::uint64_t>{1, 0, K.neg(1), 0}));
    EXPECT_EQ(parse_point(K, "(2:4:6)", 3).coords, (std::vector<std::uint64_t>{1, 2, 3}));
    EXPECT_EQ(parse_point(K, "1/2 1", 2).coords, (std::vector<std::uint64_t>{1, 2}));
    EXPECT_THROW(parse_point(K, "1,2", 4), Error);
    EXPECT_THROW(parse_point(K, "1,x,2", 3), Error);
    EXPECT_THROW(parse_point(K, "0,0", 2), Error);
}

TEST(Analyze, Example2Report)
{
    auto rep = analyze(parse_map_file(read_file(kFixtures + "/example2.map")));
    EXPECT_EQ(rep.degF, 11);
    EXPECT_EQ(rep.indeg, 2u);
    EXPECT_EQ(rep.sum_deg, 8);
    EXPECT_EQ(rep.refined, 13);
    EXPECT_EQ(rep.exit_code(), 0);
    auto j = to_json(rep);
    for (const char* key : {"degF", "indegSyz", "sumDeg", "sumWeighted", "outerBound", "refinedBound", "chainOk",
                            "fibers", "seed", "warnings", "coverage"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["fibers"].size(), 4u);
    auto text = to_text(rep);
    EXPECT_NE(text.find("8 <= 11 <= 13 <= 15"), std::string::npos) << text;
}

TEST(Analyze, FamilyDegreeFourCoincides)
{
    auto rep = analyze(parse_map_file(read_file(kFixtures + "/family_d4.map")));
    EXPECT_EQ(rep.sum_deg, 6);
    EXPECT_EQ(rep.sum_weighted, 6);
    EXPECT_EQ(rep.degF, 6);
}

TEST(Analyze, DependentFixtureWarns)
{
    auto rep = analyze(parse_map_file(read_file(kFixtures + "/cube.map")));
    EXPECT_EQ(rep.degF, rep.outer);
    EXPECT_TRUE(rep.dependent);
    EXPECT_TRUE(std::any_of(rep.warnings.begin(), rep.warnings.end(), [](const std::string& w) {
        return w.find("generators linearly dependent") != std::string::npos;
    }));
}

TEST(Analyze, RationalModeMatchesPrime)
{
    auto q = analyze(parse_map_file(read_file(kFixtures + "/example2_rational.map")));
    EXPECT_EQ(q.field, "QQ");
    EXPECT_EQ(q.degF, 11);
    EXPECT_EQ(q.sum_deg, 8);
    EXPECT_EQ(q.indeg, 2u);
}

TEST(Analyze, SecondPrime)
{
    AnalyzeOptions opt;
    opt.second_prime = true;
    auto rep = analyze(parse_map_file(read_file(kFixtures + "/example2.map")), opt);
    ASSERT_TRUE(rep.second_prime.has_value());
    EXPECT_EQ(*rep.second_prime, 2147483629u);
    EXPECT_EQ(rep.second_degF, 11);
}

TEST(Analyze, JsonIsDeterministic)
{
    auto mf = parse_map_file(read_file(kFixtures + "/example2.map"));
    EXPECT_EQ(to_json(analyze(mf)).dump(2), to_json(analyze(mf)).dump(2));
}

TEST(Commands, FiberOnFamily)
{
    auto out = cmd_fiber(parse_map_file(read_file(kFixtures + "/family_d4.map")), "0,0,1,1");
    EXPECT_EQ(out.json["h"], "X0 - X1");
    EXPECT_EQ(out.json["degH"], 1);
    EXPECT_EQ(out.exit_code, 0);
}

TEST(Commands, FiberAtRandomPointIsTrivial)
{
    auto out = cmd_fiber(parse_map_file(read_file(kFixtures + "/example2.map")), "3,-7,11,5");
    EXPECT_EQ(out.json["h"], "1");
}

TEST(Commands, FiberWrongArity)
{
    try {
        cmd_fiber(parse_map_file(read_file(kFixtures + "/example2.map")), "1,2");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::BadPoint);
    }
}

TEST(Commands, Syzygy)
{
    auto out = cmd_syzygy(parse_map_file(read_file(kFixtures + "/example2.map")), 2u);
    EXPECT_EQ(out.json["indegSyz"], 2);
    EXPECT_EQ(out.json["dimensions"][1], 0);
    EXPECT_EQ(out.json["euler"]["delta"], 4);
    EXPECT_EQ(out.exit_code, 0);
}

TEST(Commands, RankCheck)
{
    auto out = cmd_rank_check(parse_map_file(read_file(kFixtures + "/example2.map")), "1,2,3");
    EXPECT_TRUE(out.json["consistent"].get<bool>());
}

TEST(Selftest, PassesAndReportsSixFixtures)
{
    auto out = cmd_selftest(false);
    EXPECT_EQ(out.exit_code, 0) << out.text;
    EXPECT_EQ(out.json["fixtures"].size(), 6u);
}

TEST(Selftest, PerturbationFails)
{
    auto out = cmd_selftest(true);
    EXPECT_NE(out.exit_code, 0);
    EXPECT_NE(out.text.find("FAIL  example2: deg F = 11"), std::string::npos) << out.text;
}

TEST(Executable, ExitCodes)
{
    EXPECT_EQ(run_cli("analyze " + kFixtures + "/example2.map").status, 0);
    EXPECT_EQ(run_cli("analyze /nonexistent.map").status, 1);
    EXPECT_EQ(run_cli("fiber " + kFixtures + "/example2.map --point 1,2").status, 1);
    EXPECT_EQ(run_cli("selftest --perturb").status, 2);
    EXPECT_EQ(run_cli("selftest").status, 0);
}

TEST(Executable, JsonByteIdentical)
{
    auto a = run_cli("analyze " + kFixtures + "/example2.map --seed 42 --json");
    auto b = run_cli("analyze " + kFixtures + "/example2.map --seed 42 --json");
    EXPECT_EQ(a.status, 0);
    EXPECT_FALSE(a.out.empty());
    EXPECT_EQ(a.out, b.out);
}
