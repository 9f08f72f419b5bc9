#include "friendsim/cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return friendsim::cli::main(argc, argv, std::cout, std::cerr); }
