#include "dunklpot/cli.hpp"

int main(int argc, char** argv) { return dunklpot::dispatch(argc, argv); }
