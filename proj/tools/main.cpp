#include "cli.hpp"

int main(int argc, char** argv) { return warpcmc::cli::run_main(argc, argv); }
