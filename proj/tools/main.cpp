#include "extremefit/cli.hpp"

int main(int argc, char** argv) { return extremefit::cli::main(argc, argv); }
