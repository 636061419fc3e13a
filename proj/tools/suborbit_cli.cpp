#include <fstream>
#include <iostream>

#include "suborbit/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    const auto result = suborbit::cli::dispatch(args);
    if (result.output_path) {
        std::ofstream out(*result.output_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << *result.output_path << "'\n";
            return 1;
        }
        out << result.output;
    } else {
        std::cout << result.output;
    }
    std::cerr << result.diagnostics;
    return result.exit_code;
}
