#include "cli.hpp"

int main(int argc, char** argv) { return savns::cli::main(argc, argv); }
