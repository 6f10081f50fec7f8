#include <iostream>
#include <string>
#include <vector>

#include "litho/cli.hpp"

int main(int argc, char** argv) {
    namespace cli = litho::cli;
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const auto config = cli::parse_config(args);
        return cli::run(config, std::cout, std::cerr);
    } catch (const cli::HelpRequested& help) {
        std::cout << help.what();
        return cli::kOk;
    } catch (const cli::CliError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code();
    }
}
