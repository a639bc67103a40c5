#include "cli.hpp"

int main(int argc, char** argv) { return conelift::cli::run(argc, argv); }
