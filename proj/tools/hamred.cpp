#include "cli/run.hpp"

int main(int argc, char** argv) { return hamred::cli::run(argc, argv); }
