#include "gridcast/cli/app.hpp"

int main(int argc, char** argv) { return gridcast::cli::run(argc, argv); }
