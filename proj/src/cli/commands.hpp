#pragma once

#include <string>

#include "config.hpp"

namespace tenrec::cli {

// Each command returns a one-line stdout summary; heavy outputs go to files
// under `output.dir`. Errors surface as tenrec::Error exceptions.
std::string cmd_prepare(const RunConfig& cfg);
std::string cmd_train(const RunConfig& cfg);
std::string cmd_tune(const RunConfig& cfg);
std::string cmd_evaluate(const RunConfig& cfg);
std::string cmd_recommend(const RunConfig& cfg);

}  // namespace tenrec::cli
