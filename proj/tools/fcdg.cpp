#include "fcdg/cli.hpp"

int main(int argc, char** argv) { return fcdg::cli_main(argc, argv); }
