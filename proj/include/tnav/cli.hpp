// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end shared by the `tnav` tool and the tests.
//
// Exit codes: 0 success, 1 no path, 2 bad input (including unknown flags).

#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace tnav {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNoPath = 1;
inline constexpr int kExitBadInput = 2;

/// `args[0]` is the program name.
int cli_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tnav
