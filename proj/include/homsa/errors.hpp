#pragma once

#include <stdexcept>
#include <string>

namespace homsa {

// Malformed or inconsistent user input (bad syntax, dimension mismatch, ...).
// CLI exit code 1.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured cap was exceeded (grid level, table size, face count, DNF
// clauses, ...). CLI exit code 2.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// The condition estimate diverged or an evaluation point was exactly
// ill-posed; the input's topology cannot be certified. CLI exit code 2.
class ill_posed_error : public resource_error {
public:
    explicit ill_posed_error(const std::string& what) : resource_error(what) {}
};

} // namespace homsa
