#include "lexplain/cli.hpp"

int main(int argc, char** argv) { return lexplain::cli::run(argc, argv); }
