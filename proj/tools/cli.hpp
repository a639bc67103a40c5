#pragma once

// conelift command-line front end.
//
// Exit codes: 0 when no report row has verdict "fail", 1 when at least one
// does (the report is still written) or a numeric run fails, 2 for usage and
// configuration errors. CONELIFT_BACKEND (jet | central) sets the default
// differentiation backend.

#include <iosfwd>
#include <string>
#include <vector>

namespace conelift::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace conelift::cli
