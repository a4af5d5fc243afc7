#include "aicg/cli.hpp"

int main(int argc, char** argv) { return aicg::cli::run(argc, argv); }
