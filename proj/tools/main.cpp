#include <iostream>

#include "cli_app.hpp"

int main(int argc, char** argv) {
  mccf_cli::Cli cli;
  return cli.run(argc, argv, std::cout, std::cerr);
}
