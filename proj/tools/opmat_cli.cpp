#include "opmat/cli.hpp"

int main(int argc, char** argv) { return opmat::cli::run(argc, argv); }
