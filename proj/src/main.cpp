#include "ffrplan/cli.hpp"

int main(int argc, char** argv) { return ffr::cli_main(argc, argv); }
