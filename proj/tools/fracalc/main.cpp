#include "cli.hpp"

int main(int argc, char** argv) { return fracalc::cli::run(argc, argv); }
