#include "geoqa/cli.hpp"

int main(int argc, char** argv) { return geoqa::cli::run(argc, argv); }
