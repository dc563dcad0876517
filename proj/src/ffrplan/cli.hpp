#pragma once

namespace ffr {

// Full command-line entry point (analyze | optimize | simulate | validate).
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 acceptance failure.
int cli_main(int argc, const char* const* argv);

}  // namespace ffr
