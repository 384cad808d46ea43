#include "uwbpc/cli.hpp"

int main(int argc, char** argv) { return uwbpc::cli::parse_and_dispatch(argc, argv); }
