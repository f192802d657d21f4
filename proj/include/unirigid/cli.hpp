// Command-line front end. Exit codes: 0 success, 1 input error, 2 aborted
// integration (or a failed child run in `compare`), 3 comparison gap above
// tolerance.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace unirigid {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitAborted = 2;
inline constexpr int kExitGap = 3;

/// `args` excludes the program name and the subcommand.
int cmd_simulate(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_compare(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_validate(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatches on args[0] (simulate, compare, validate).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unirigid
