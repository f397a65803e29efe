#include <iostream>
#include <string>
#include <vector>

#include "singtrace/cli.hpp"
#include "singtrace/error.hpp"

int main(int argc, char** argv) {
  std::optional<double> tol;
  try {
    tol = singtrace::tolerance_from_env();
  } catch (const singtrace::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return singtrace::kExitInput;
  }
  std::vector<std::string> args(argv + 1, argv + argc);
  return singtrace::run_cli(args, std::cin, std::cout, std::cerr, tol);
}
