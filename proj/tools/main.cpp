#include "eqsim/harness/cli.hpp"

int main(int argc, char** argv) { return eqsim::cli_main(argc, argv); }
