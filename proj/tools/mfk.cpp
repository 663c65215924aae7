#include "mfk_cli.hpp"

int main(int argc, char** argv) { return mfk::cli::run(argc, argv); }
