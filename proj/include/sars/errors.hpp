#pragma once

#include <stdexcept>
#include <string>

namespace sars {

// A scenario or topology breaks one of its structural rules. `entity` names
// the offending object ("server 2", "pu 1.3", "workload.groups[0]").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string entity, std::string rule)
        : std::runtime_error(entity + ": " + rule), entity_(std::move(entity)), rule_(std::move(rule)) {}

    const std::string& entity() const { return entity_; }
    const std::string& rule() const { return rule_; }

private:
    std::string entity_;
    std::string rule_;
};

// Malformed input text. line is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string what, int line = 0) : std::runtime_error(std::move(what)), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace sars
