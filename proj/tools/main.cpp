#include "qcarpet/cli.hpp"

int main(int argc, char** argv) { return qcarpet::cli::run(argc, argv); }
