#pragma once

#include <stdexcept>
#include <string>

namespace specgeo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid mesh input. `element` is the offending vertex, edge,
/// face or line index (-1 when not applicable).
class MeshError : public Error
{
public:
    MeshError(const std::string& what, long element)
        : Error(what + (element >= 0 ? " (element " + std::to_string(element) + ")" : ""))
        , m_element(element)
    {}

    long element() const { return m_element; }

private:
    long m_element;
};

/// A parameter lies outside the domain where the quantity is defined.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// An iterative solver hit its cap before reaching the residual tolerance.
class ConvergenceError : public Error
{
public:
    ConvergenceError(const std::string& what, double achieved_residual)
        : Error(what + " (achieved residual " + std::to_string(achieved_residual) + ")")
        , m_residual(achieved_residual)
    {}

    double achieved_residual() const { return m_residual; }

private:
    double m_residual;
};

/// Suite or model configuration could not be parsed. `line` is 1-based, 0 if unknown.
class ConfigError : public Error
{
public:
    ConfigError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what)
        , m_line(line)
    {}

    int line() const { return m_line; }

private:
    int m_line;
};

} // namespace specgeo
