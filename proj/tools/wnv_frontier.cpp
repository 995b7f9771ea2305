#include "wnv/cli.hpp"

int main(int argc, char** argv) { return wnv::run_cli(argc, argv); }
