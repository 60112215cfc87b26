#pragma once

#include <string>
#include <vector>

#include "document.hpp"

namespace bk::cli {

struct Options {
  long long precision = 0;
  int pole_bound = 0;
  bool strong = false;
};

enum ExitCode { kOk = 0, kPropertyFails = 1, kInputError = 2 };

struct Outcome {
  json report;
  std::string summary;  // one line for stdout
  int exit_code = kOk;
};

const std::vector<std::string>& command_names();

// Runs one command on a parsed document. Throws SchemaError on bad input
// and lets PrecisionError through; the caller maps both to exit code 2.
Outcome run_command(const std::string& command, const json& doc, const Options& opt);

// Deterministic record of every worked computation.
json reproduce_manifest();

}  // namespace bk::cli
