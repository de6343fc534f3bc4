// Command-line front end: analyze, fiber, syzygy, rank-check, selftest.
// Exit codes: 0 ok, 1 input error, 2 a checked bound or identity failed.

#include "fiberbound/report.hpp"
#include "fiberbound/selftest.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int emit(const fiberbound::CommandOutput& out, bool json)
{
    if (json)
        std::cout << out.json.dump(2) << '\n';
    else
        std::cout << out.text;
    return out.exit_code;
}

fiberbound::MapFile load(const std::string& path)
{
    return fiberbound::parse_map_file(fiberbound::read_file(path));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Degree bounds for contracted fibers of rational maps"};
    app.require_subcommand(1);

    std::string path, point;
    bool json = false;

    fiberbound::AnalyzeOptions aopt;
    auto* analyze = app.add_subcommand("analyze", "compute F, indeg Syz, contracted fibers and the bound chain");
    analyze->add_option("file", path, "map file")->required();
    analyze->add_option("--seed", aopt.seed, "random seed");
    analyze->add_option("--budget", aopt.budget, "number of random lines sampled on Z(F)");
    analyze->add_option("--max-extension", aopt.max_extension_degree, "largest extension degree used on sample lines")
        ->check(CLI::Range(1, 4));
    analyze->add_flag("--second-prime", aopt.second_prime, "recompute deg F modulo the previous prime");
    analyze->add_flag("--json", json, "JSON output");

    std::uint64_t fseed = 42;
    auto* fiber = app.add_subcommand("fiber", "fiber equation h_y of a target point");
    fiber->add_option("file", path, "map file")->required();
    fiber->add_option("--point", point, "target point, e.g. 1,0,-1,0")->required();
    fiber->add_option("--seed", fseed, "random seed for the contraction check");
    fiber->add_flag("--json", json, "JSON output");

    std::optional<unsigned> max_degree;
    auto* syzygy = app.add_subcommand("syzygy", "graded syzygies of the forms");
    syzygy->add_option("file", path, "map file")->required();
    syzygy->add_option("--max-degree", max_degree, "largest syzygy degree searched (default d)");
    syzygy->add_flag("--json", json, "JSON output");

    auto* rank = app.add_subcommand("rank-check", "rank J(f)(q) against rank dphi_q + 1");
    rank->add_option("file", path, "map file")->required();
    rank->add_option("--point", point, "source point")->required();
    rank->add_flag("--json", json, "JSON output");

    bool perturb = false;
    std::uint64_t sseed = 42;
    auto* selftest = app.add_subcommand("selftest", "run built-in fixtures and invariant suites");
    selftest->add_flag("--perturb", perturb, "alter one fixture coefficient; the run must then fail");
    selftest->add_option("--seed", sseed, "random seed");
    selftest->add_flag("--json", json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*analyze) return emit(fiberbound::cmd_analyze(load(path), aopt), json);
        if (*fiber) return emit(fiberbound::cmd_fiber(load(path), point, fseed), json);
        if (*syzygy) return emit(fiberbound::cmd_syzygy(load(path), max_degree), json);
        if (*rank) return emit(fiberbound::cmd_rank_check(load(path), point), json);
        if (*selftest) return emit(fiberbound::cmd_selftest(perturb, sseed), json);
    } catch (const fiberbound::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
