#include <iostream>

#include "ffrplan/acceptance.hpp"

int main() {
  ffr::AcceptanceOptions opts;
  const bool ok = ffr::run_acceptance(std::cout, opts);
  return ok ? 0 : 4;
}
