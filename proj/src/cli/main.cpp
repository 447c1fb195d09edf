#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bs/cli.hpp"
#include "bs/error.hpp"

namespace bs {

int cli_main(int argc, char** argv) {
    CLI::App app{"bs: a small scripting language bridged to a reflective host object system"};
    app.require_subcommand(1);
    std::optional<std::string> manifest;
    app.add_option("--manifest", manifest, "JSON manifest of extra host classes");

    std::string file;
    auto* run = app.add_subcommand("run", "run a script file");
    run->add_option("file", file, "script to run")->required();

    app.add_subcommand("repl", "interactive console (try demo())");

    std::string expr;
    auto* eval = app.add_subcommand("eval", "evaluate an expression");
    eval->add_option("-e,--expr", expr, "expression or statements")->required();

    long iterations = 1000000;
    bool json = false;
    auto* bench = app.add_subcommand("bench", "time calls across the bridge");
    bench->add_option("--iterations", iterations, "loop iterations")->check(CLI::PositiveNumber);
    bench->add_flag("--json", json, "print a flat JSON record, times in nanoseconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::shared_ptr<const Registry> registry;
    try {
        registry = load_registry(manifest);
    } catch (const std::exception& e) {
        std::cerr << "bs: " << e.what() << '\n';
        return 2;
    }

    if (*run)
        return run_file(file, std::cout, std::cerr, registry);
    if (*eval)
        return eval_source(expr, std::cout, std::cerr, registry);
    if (*bench) {
        try {
            BenchReport r = run_bench(iterations, registry);
            std::cout << (json ? report_json(r) + "\n" : format_report(r));
            return r.order_holds() ? 0 : 1;
        } catch (const Error& e) {
            std::cerr << "bs: " << e.what() << '\n';
            return e.kind() == ErrorKind::IterationsTooSmall ? 2 : 1;
        }
    }
    repl(std::cin, std::cout, std::cerr, registry);
    return 0;
}

}  // namespace bs
