#include "fanocav/cli.hpp"

int main(int argc, char** argv) { return fanocav::run_cli(argc, argv); }
