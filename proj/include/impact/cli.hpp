#pragma once

namespace impact {

// Full command-line front end: simulate, train, evaluate, compare,
// learning-curve, impact. Returns the process exit code; errors come back as
// a single machine-parsable stderr line `error: <module.Code>: <message>`.
int run_cli(int argc, const char* const* argv);

}  // namespace impact
