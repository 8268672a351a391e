#pragma once

#include <stdexcept>
#include <string>

namespace revguard {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or record.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Well-formed input that breaks a corpus or model invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

/// Backend failure after retries, or an empty backend response.
class GatewayError : public Error {
public:
    using Error::Error;
};

/// A stage of an experiment run failed; the message names the stage.
class ExperimentError : public Error {
public:
    using Error::Error;
};

}  // namespace revguard
