//==============================================================================
// kakinuma_main.cpp
// Thin executable wrapper around the shared command-line driver.
//==============================================================================
#include "kakinuma/cli.hpp"

int main(int argc, char** argv) { return kakinuma::run_cli(argc, argv); }
