#pragma once

#include <stdexcept>
#include <string>

namespace atr {

class Error : public std::runtime_error {
public:
    explicit Error(std::string msg) : std::runtime_error(std::move(msg)) {}
};

class NumericalOverflow : public Error {
public:
    using Error::Error;
};

class EmptyData : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& msg)
        : Error("parse error at line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + msg),
          line(line), column(column) {}
    int line;
    int column;
};

class LabelError : public Error {
public:
    using Error::Error;
};

class NotConvex : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class MaxIterations : public Error {
public:
    using Error::Error;
};

class Diverged : public Error {
public:
    using Error::Error;
};

class BisectionStall : public Error {
public:
    using Error::Error;
};

class BracketError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& msg)
        : Error("config error for key '" + key + "': " + msg), key(std::move(key)) {}
    std::string key;
};

}  // namespace atr
