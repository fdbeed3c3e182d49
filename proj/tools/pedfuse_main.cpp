#include "pedfuse/cli/app.hpp"

int main(int argc, char** argv) { return pedfuse::cli::run(argc, argv); }
