#include <iostream>

#include "hgr/cli.hpp"

int main(int argc, char** argv) {
  return hgr::cli_main(argc, argv, std::cout, std::cerr);
}
