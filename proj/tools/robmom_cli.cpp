#include "robmom/cli.hpp"

int main(int argc, char** argv)
{
    return robmom::cli::run(argc, argv);
}
