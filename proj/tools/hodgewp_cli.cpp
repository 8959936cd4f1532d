#include "hodgewp/cli.hpp"

int main(int argc, char** argv) { return hodgewp::cli::run(argc, argv); }
