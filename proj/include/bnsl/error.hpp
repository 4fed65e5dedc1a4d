#pragma once

#include <stdexcept>
#include <string>

namespace bnsl {

/// Malformed or inconsistent data, networks or graphs.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A node or variable name that is not part of the graph or dataset.
class UnknownNode : public DataError {
public:
    explicit UnknownNode(const std::string& name)
        : DataError("unknown node '" + name + "'"), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Invalid learning or experiment configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace bnsl
