#include "bs/cli.hpp"

int main(int argc, char** argv) { return bs::cli_main(argc, argv); }
