#include "densecap/commands.hpp"

int main(int argc, char** argv) { return densecap::cli::run(argc, argv); }
