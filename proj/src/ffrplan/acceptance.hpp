#pragma once

#include <cstdint>
#include <ostream>

namespace ffr {

struct AcceptanceOptions {
  uint64_t seed = 1;
  int threads = 1;
  int sim_slots = 100;
  int sim_initial_drops = 256;
  int sim_max_drops = 4096;
};

// Runs the full release gate: one line per criterion ("PASS n: ..." or
// "FAIL n: ...") plus a summary line. Returns true when every criterion holds.
bool run_acceptance(std::ostream& log, const AcceptanceOptions& opt = {});

}  // namespace ffr
