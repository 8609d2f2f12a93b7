#include "impact/cli.hpp"

int main(int argc, char** argv) { return impact::run_cli(argc, argv); }
