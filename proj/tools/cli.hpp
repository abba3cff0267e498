#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ktfunc::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,
    kUsageError = 2,
    kSizeGuard = 3,
};

/// Runs one command line (args excludes the program name). Reads an instance
/// from `in` when no input file is given.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Parses an exponent flag value; accepts "inf".
double parse_exponent(const std::string& text);

}  // namespace ktfunc::cli
