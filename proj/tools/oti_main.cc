#include "cli/commands.h"

int main(int argc, char** argv) { return oti::cli::run_cli(argc, argv); }
