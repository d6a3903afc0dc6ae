// SPDX-License-Identifier: Apache-2.0
#include "risfocus/cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    return risfocus::cli_dispatch({argv, argv + argc}, std::cout, std::cerr);
}
