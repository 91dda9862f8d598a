#include "stabcert/cli.hpp"

int main(int argc, char** argv) { return stabcert::cli::run(argc, argv); }
