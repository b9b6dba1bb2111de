#include "sfa_cli/run.hpp"

int main(int argc, char** argv) { return sfa::cli::main_entry(argc, argv); }
