#include "slei/cli.hpp"

int main(int argc, char** argv) { return slei::run_cli(argc, argv); }
