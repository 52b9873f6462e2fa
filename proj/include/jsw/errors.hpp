#pragma once

#include <stdexcept>
#include <string>

namespace jsw {

// Witness generation refuses schemas where uniqueItems/repeatedItems survive
// preparation; validation still supports them.
class UnsupportedUniquenessError : public std::runtime_error {
public:
    explicit UnsupportedUniquenessError(const std::string& where)
        : std::runtime_error("witness generation does not support uniqueItems/repeatedItems (" +
                             where + ")") {}
};

// An enumeration budget ran out. This is a diagnostic outcome, never a wrong
// answer.
class BudgetExceededError : public std::runtime_error {
public:
    explicit BudgetExceededError(const std::string& what)
        : std::runtime_error("budget exceeded: " + what) {}
};

class UnsupportedKeywordError : public std::runtime_error {
public:
    explicit UnsupportedKeywordError(const std::string& keyword)
        : std::runtime_error("unsupported keyword: " + keyword), keyword_(keyword) {}
    const std::string& keyword() const { return keyword_; }

private:
    std::string keyword_;
};

class UnresolvableRefError : public std::runtime_error {
public:
    explicit UnresolvableRefError(const std::string& ref)
        : std::runtime_error("unresolvable $ref: " + ref) {}
};

} // namespace jsw
