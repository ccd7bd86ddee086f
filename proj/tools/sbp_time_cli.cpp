#include "sbp_time/cli.hpp"

int main(int argc, char** argv) { return sbp_time::cli::run(argc, argv); }
