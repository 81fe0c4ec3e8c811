#include "atr/harness.hpp"

int main(int argc, char** argv)
{
    return atr::cli_main(argc, argv);
}
