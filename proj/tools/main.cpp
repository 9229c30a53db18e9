#include "cli.hpp"

int main(int argc, char** argv) { return lyapdisp::cli::run(argc, argv); }
