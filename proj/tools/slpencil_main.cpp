#include <CLI11.hpp>

#include "slp/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral analysis of Sturm-Liouville pencils with measure coefficients"};
    app.require_subcommand(0, 0);

    std::string command, config_path, out_dir = ".";
    long long seed = -1;
    int cells = 0;

    app.add_option("command", command,
                   "solve | transform | oscillate | chebyshev | regularity | all")
        ->required();
    app.add_option("--config", config_path, "problem description file")->required();
    app.add_option("--out", out_dir, "output directory (default: current)");
    app.add_option("--seed", seed, "override analysis.seed");
    app.add_option("--cells", cells, "override mesh.cells");

    CLI11_PARSE(app, argc, argv);

    slp::cli::Overrides overrides;
    if (seed >= 0) overrides.seed = static_cast<std::uint64_t>(seed);
    if (cells > 0) overrides.cells = cells;
    return slp::cli::run(command, config_path, out_dir, overrides);
}
