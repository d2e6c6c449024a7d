#include <iostream>

#include "experiment.hpp"

int main(int argc, char** argv) { return modleach::cli::run_cli(argc, argv, std::cout, std::cerr); }
