#pragma once

#include <string>

// Runs one self-check suite (axioms | oracle | gradcheck | convergence),
// printing a line per check. Returns true when every check passes.
bool run_verify_suite(const std::string& suite);
