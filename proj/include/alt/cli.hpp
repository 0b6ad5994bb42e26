#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace alt::cli {

// Exit codes.
constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfigError = 2;

// Default run configuration; every key may appear in a --config document.
nlohmann::json default_config();

// args[0] is the program name, as in argv.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace alt::cli
