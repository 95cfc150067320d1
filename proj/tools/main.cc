#include "sportscaster/cli.h"

int main(int argc, char** argv) { return sportscaster::cli::run(argc, argv); }
