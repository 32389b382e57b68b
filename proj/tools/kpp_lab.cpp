#include "kpp_lab/cli.hpp"

int main(int argc, char** argv) { return kpp_lab::cli::run(argc, argv); }
