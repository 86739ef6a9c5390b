#include "dcns/cli.hpp"

int main(int argc, char** argv)
{
    return dcns::run_cli(argc, argv);
}
