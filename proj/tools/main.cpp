#include "conformal/cli/runner.hpp"

int main(int argc, char** argv) { return conformal::cli::run_cli(argc, argv); }
