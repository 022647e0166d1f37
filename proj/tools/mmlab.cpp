#include "mmlab/cli.hpp"

int main(int argc, char** argv) { return mmlab::cli::run_command(argc, argv); }
