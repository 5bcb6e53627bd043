#include "run.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Saint-Venant and Almansi cross-section solver for piezoelectric beams", "piezosv"};
    std::string command;
    std::filesystem::path config;
    std::filesystem::path out_dir = ".";
    app.add_option("command", command, "derive | solve | verify | sweep")
        ->required()
        ->check(CLI::IsMember({"derive", "solve", "verify", "sweep"}));
    app.add_option("--config", config, "INI configuration file")->required();
    app.add_option("--out-dir", out_dir, "directory for fields, report and sweep files");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : piezosv::cli::kConfigError;
    }
    return piezosv::cli::run(command, config, out_dir, std::cout, std::cerr);
}
