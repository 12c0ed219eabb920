#include "cli.hpp"

int main(int argc, char** argv) { return medlat::cli::run(argc, argv); }
