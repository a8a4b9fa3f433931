#include "cli/dispatch.hpp"

int main(int argc, char** argv) { return staqst::cli::run_main(argc, argv); }
