#include "swarmpf/cli.hpp"

int main(int argc, char** argv) { return swarmpf::cli_main(argc, argv); }
