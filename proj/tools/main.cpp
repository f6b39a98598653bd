#include <iostream>

#include "docreward/commands.hpp"

int main(int argc, char** argv) {
  return docreward::run_cli(argc, argv, std::cout, std::cerr);
}
