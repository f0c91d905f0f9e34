#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bvlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class BracketError : public Error {
public:
    using Error::Error;
};

class NewtonDivergence : public Error {
public:
    NewtonDivergence(const std::string& what, std::vector<double> last_iterate = {})
        : Error(what), last_iterate_(std::move(last_iterate)) {}
    const std::vector<double>& last_iterate() const { return last_iterate_; }

private:
    std::vector<double> last_iterate_;
};

class BranchError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& key, const std::string& what)
        : Error("config key '" + key + "': " + what), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

// Wraps a failure inside run_sequence with the offending k.
class SolverError : public Error {
public:
    SolverError(int k, const std::string& what)
        : Error("k=" + std::to_string(k) + ": " + what), k_(k) {}
    int k() const { return k_; }

private:
    int k_;
};

}  // namespace bvlab
