#pragma once

#include <string_view>

#include "esst/frontend/program.hpp"

namespace esst::frontend {

/// Throws ParseError (with line/column) on syntax errors, undeclared
/// identifiers, duplicate names, non-linear arithmetic, function definitions
/// and non-constant primitive arguments.
ThreadedProgram parse_program(std::string_view text);

ThreadedProgram parse_file(const std::string& path);

}  // namespace esst::frontend
