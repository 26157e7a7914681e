#pragma once

namespace famicom {

/// Entry point behind the `famicom` binary. Exit codes: 0 success,
/// 1 runtime failure (backend or data), 2 usage or configuration error.
int run_cli(int argc, const char* const* argv);

}  // namespace famicom
