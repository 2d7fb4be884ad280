#include <CLI11.hpp>
#include <iostream>

#include "medvote/lattice.hpp"
#include "medvote/relation.hpp"

using namespace medvote;

int main(int argc, char** argv) {
    CLI::App app{"median-semilattice preference aggregation toolkit"};
    app.require_subcommand(1);

    std::string ground_csv = "a,b,c";

    auto* enumerate = app.add_subcommand("enumerate", "list all total preorders on the ground set");
    enumerate->add_option("--ground", ground_csv, "comma-separated alternative labels");

    auto* graph = app.add_subcommand("graph", "emit the covering digraph in DOT format");
    graph->add_option("--ground", ground_csv, "comma-separated alternative labels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        auto g = GroundSet::parse(ground_csv);
        if (enumerate->parsed()) {
            for (const auto& r : enumerate_preorders(g))
                std::cout << render_preorder(r) << "\n";
            return 0;
        }
        if (graph->parsed()) {
            std::cout << lattice_dot(g);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
