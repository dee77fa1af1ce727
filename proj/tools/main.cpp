#include "cli.hpp"

int main(int argc, char** argv) { return eplab::cli::main_entry(argc, argv); }
