#include "pearl/cli.hpp"

int main(int argc, char** argv)
{
    return pearl::cli::main(argc, argv);
}
