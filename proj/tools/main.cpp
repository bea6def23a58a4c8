#include "cli.hpp"

int main(int argc, char** argv) { return tlab::cli::run(argc, argv); }
