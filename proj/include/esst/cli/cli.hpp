#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "esst/concrete/interpreter.hpp"
#include "esst/engine/checker.hpp"

namespace esst::cli {

struct OracleConfig {
  std::vector<long> values{-1, 0, 1, 2};
  int depth = 500;
};

/// "-1,0,1,2:500"; throws std::invalid_argument.
OracleConfig parse_oracle(const std::string& text);

struct RunOutcome {
  std::string program;
  engine::Result result;
  std::optional<concrete::ReachResult> oracle;
  std::string oracle_error;
};

/// One line of space-separated key=value pairs.
std::string report_record(const RunOutcome& r, const engine::Options& opts);

/// Exit code: 0 SAFE, 1 UNSAFE, 2 UNKNOWN, 3 usage or internal error.
int exit_code(engine::Verdict v);

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace esst::cli
