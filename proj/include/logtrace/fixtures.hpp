#pragma once

#include <string>
#include <vector>

namespace logtrace {

// built-in model files used by the self test and the test suites;
// returns an empty string for unknown names
std::string builtin_fixture(const std::string& name);

std::vector<std::string> fixture_names();

}  // namespace logtrace
