#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nlrothe/config.hpp"

int main(int argc, char** argv) {
    using namespace nlrothe;

    std::vector<std::string> args(argv + 1, argv + argc);
    for (const auto& a : args) {
        if (a == "--help" || a == "-h") {
            std::cout << cli_usage();
            return 0;
        }
    }
    if (args.empty()) {
        std::cerr << cli_usage();
        return 2;
    }

    const std::string subcommand = args.front();
    std::vector<std::string> config_paths;
    std::vector<std::string> overrides;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i].rfind("--", 0) == 0) {
            overrides.push_back(args[i]);
            if (i + 1 < args.size()) overrides.push_back(args[++i]);
        } else {
            config_paths.push_back(args[i]);
        }
    }

    try {
        ExperimentConfig cfg;
        if (!config_paths.empty()) cfg = parse_config_file(config_paths[0]);
        cfg = apply_overrides(std::move(cfg), overrides);

        std::optional<ExperimentConfig> other;
        if (config_paths.size() > 1) other = parse_config_file(config_paths[1]);
        if (config_paths.size() > 2) {
            std::cerr << "error: at most two config files\n";
            return 2;
        }
        return run_experiment(subcommand, cfg, other);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
