#include "stvmanip_cli.hpp"

int main(int argc, char** argv) { return stvm::cli::run(argc, argv); }
