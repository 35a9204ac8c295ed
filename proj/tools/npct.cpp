#include "npct/cli.hpp"

int main(int argc, char** argv) { return npct::parse_and_dispatch(argc, argv); }
