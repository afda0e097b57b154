#include "splitlab/cli/run.hpp"

int main(int argc, char** argv) { return splitlab::cli::run_cli(argc, argv); }
