#include "rlve/cli.hpp"

int main(int argc, char** argv) { return rlve::run_cli(argc, argv); }
