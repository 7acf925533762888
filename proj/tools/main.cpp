#include "geohalu/cli/cli.hpp"

int main(int argc, char** argv) { return geohalu::cli::run_cli(argc, argv); }
