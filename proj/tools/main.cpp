#include "cli.hpp"

int main(int argc, char** argv) { return fla::cli::run(argc, argv); }
