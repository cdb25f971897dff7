#include "latops/cli.hpp"

int main(int argc, char** argv) { return latops::cli::run_command({argv, argv + argc}); }
