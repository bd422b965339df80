#include "cdalg/cli.hpp"

int main(int argc, char** argv) { return cdalg::cli_main(argc, argv); }
