// nhse: command-line front end.
//
//   nhse spectrum   --config run.ini --out DIR
//   nhse sweep      --config run.ini --out DIR --workers 4
//   nhse winding | transfer | geometry2d  (same flags)
//   nhse recipe fig4 [--out DIR]     writes fig4.ini, or prints it

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "nhse/io/config.hpp"
#include "nhse/io/recipes.hpp"
#include "nhse/io/run.hpp"

namespace {

struct Common {
    std::string config;
    std::string out = "out";
    unsigned workers = nhse::default_workers();
    long seed = 0;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "configuration file (INI)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "reserved; no stochastic components")->capture_default_str();
}

int execute(nhse::io::Command cmd, const Common& c) {
    const auto cfg = nhse::io::load_config(c.config);
    const auto report = nhse::io::run(cmd, cfg, {c.out, c.workers, c.seed});
    for (const auto& f : report.files)
        std::cout << f.string() << "\n";
    if (report.failures > 0)
        std::cerr << "nhse: " << report.failures << " point(s) failed; see the error column\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Magnetic control of the non-Hermitian skin effect: strip and 2D diagnostics"};
    app.require_subcommand(1);

    Common common;
    const std::pair<const char*, nhse::io::Command> commands[] = {
        {"spectrum", nhse::io::Command::spectrum},     {"sweep", nhse::io::Command::sweep},
        {"winding", nhse::io::Command::winding},       {"transfer", nhse::io::Command::transfer},
        {"geometry2d", nhse::io::Command::geometry2d},
    };
    std::vector<std::pair<CLI::App*, nhse::io::Command>> subs;
    for (const auto& [name, cmd] : commands) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " diagnostics");
        add_common(sub, common);
        subs.emplace_back(sub, cmd);
    }

    std::string recipe_name, recipe_out;
    auto* recipe = app.add_subcommand("recipe", "emit a figure configuration");
    recipe->add_option("name", recipe_name, "figure name")->required();
    recipe->add_option("--out", recipe_out, "directory for <name>.ini (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (recipe->parsed()) {
            const auto& text = nhse::io::recipe_text(recipe_name);
            if (recipe_out.empty()) {
                std::cout << text;
                return 0;
            }
            std::filesystem::create_directories(recipe_out);
            const auto path = std::filesystem::path(recipe_out) / (recipe_name + ".ini");
            std::ofstream(path, std::ios::binary) << text;
            std::cout << path.string() << "\n";
            return 0;
        }
        for (const auto& [sub, cmd] : subs)
            if (sub->parsed())
                return execute(cmd, common);
    } catch (const std::exception& e) {
        std::cerr << "nhse: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
