#pragma once

#include <stdexcept>
#include <string>

namespace sentinel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class EmptyCorpusError : public Error {
public:
    using Error::Error;
};

class EmptyGraphError : public Error {
public:
    using Error::Error;
};

/// A partition does not assign a label to some graph node.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// Two inputs are defined over different domains (e.g. partitions over different node sets).
class DomainError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

/// A statistic is undefined for the given input (zero variance, no pairable values, ...).
class UndefinedError : public Error {
public:
    using Error::Error;
};

class DegenerateError : public Error {
public:
    using Error::Error;
};

}  // namespace sentinel
