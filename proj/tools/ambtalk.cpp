#include <iostream>

#include "ambtalk/cli.hpp"

int main(int argc, char** argv) { return ambtalk::run_cli(argc, argv, std::cout, std::cerr); }
