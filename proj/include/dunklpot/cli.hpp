#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dunklpot {

/// Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

}  // namespace dunklpot
