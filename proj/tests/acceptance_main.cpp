#include <iostream>

#include "acceptance.hpp"

int main() { return innerlab::cli::run_acceptance(std::cout, 0) == 0 ? 0 : 1; }
