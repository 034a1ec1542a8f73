#include "fhj/cli.hpp"

int main(int argc, char** argv) { return fhj::cli::run(argc, argv); }
