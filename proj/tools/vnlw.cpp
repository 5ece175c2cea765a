// vnlw <subcommand> --config <path> [--seed <u64>] [--replicas <n>] [--out <dir>]
// Exit codes: 0 success, 2 configuration error, 3 numerical failure (blow-up), 1 anything else.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "vnlw/harness.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Viscous nonlinear wave laboratory"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::uint64_t seed = 0;
    std::size_t replicas = 0;
    std::string out_dir;

    for (const auto& name : vnlw::subcommands()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " study");
        sub->add_option("--config", config_path, "flat key = value config file")->required();
        sub->add_option("--seed", seed, "master seed (overrides randomization.seed)");
        sub->add_option("--replicas", replicas, "ensemble size (overrides randomization.ensemble)");
        sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* chosen = app.get_subcommands().front();
    vnlw::RunOptions options;
    if (chosen->count("--seed")) options.seed = seed;
    if (chosen->count("--replicas")) options.replicas = replicas;
    if (chosen->count("--out")) options.output_directory = out_dir;

    try {
        const vnlw::RunConfig config = vnlw::load_config(config_path);
        const vnlw::OutputManifest manifest = vnlw::run(chosen->get_name(), config, options);
        std::cout << manifest.to_text();
        if (manifest.blow_up) {
            std::cerr << "numerical failure: " << manifest.status << "\n";
            return 3;
        }
        if (!manifest.complete) {
            std::cerr << manifest.status << "\n";
            return 1;
        }
        return 0;
    } catch (const vnlw::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
