#include "litkg/cli.hpp"

int main(int argc, char** argv) { return litkg::cli::run(argc, argv); }
