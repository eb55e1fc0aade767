#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "sewprop/cli.hpp"

int main(int argc, char** argv)
{
    using namespace sewprop;

    CLI::App app{"sewprop: sewing, propagation and twisted modules for genus-0 conformal blocks"};
    std::string command, config_path, mode, out;
    std::optional<int> cutoff_grade, cutoff_q, threads, k, grade, range, order;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> fixture;
    bool dump_config = false;

    app.add_option("command", command, "subcommand")->required()->check(CLI::IsMember(subcommands()));
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--cutoff-grade", cutoff_grade, "weight cutoff L of the modules");
    app.add_option("--cutoff-q", cutoff_q, "q-order N, or the expansion window");
    app.add_option("--mode", mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
    app.add_option("--threads", threads, "worker threads");
    app.add_option("--out", out, "write the result here instead of stdout");
    app.add_option("--k", k, "order of the cyclic permutation");
    app.add_option("--grade", grade, "largest grade of the sampled vectors");
    app.add_option("--range", range, "index range of the Jacobi checks");
    app.add_option("--order", order, "order M of coordinate changes");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--fixture", fixture, "residue-check fixture: constant, inverse, perturbed or all");
    app.add_flag("--dump-config", dump_config, "print the effective configuration as JSON and exit");
    CLI11_PARSE(app, argc, argv);

    RunConfig c;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            c = config_from_json(nlohmann::json::parse(in));
        }
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "config error: " << config_path << ": " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    c.command = command;
    if (cutoff_grade) c.cutoff_grade = *cutoff_grade;
    if (cutoff_q) c.cutoff_q = *cutoff_q;
    if (!mode.empty()) c.mode = mode;
    if (threads) c.threads = *threads;
    if (!out.empty()) c.out = out;
    if (k) c.k = *k;
    if (grade) c.grade = *grade;
    if (range) c.range = *range;
    if (order) c.order = *order;
    if (seed) c.seed = *seed;
    if (fixture) c.fixture = *fixture;

    if (dump_config) {
        std::cout << config_to_json(c).dump(2) << "\n";
        return 0;
    }
    return run(c, std::cout, std::cerr);
}
