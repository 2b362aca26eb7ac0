#include "covertcast/cli.hpp"

int main(int argc, char** argv) { return covertcast::cli_main(argc, argv); }
