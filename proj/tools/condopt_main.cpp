#include "condopt/cli.hpp"

int main(int argc, char** argv)
{
    return condopt::run_cli(argc, argv);
}
