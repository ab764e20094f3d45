#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace strat {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GrazingIncidence : public Error {
public:
    explicit GrazingIncidence(double theta)
        : Error("grazing incidence: |cos(theta)| < 1e-6 (theta = " + std::to_string(theta) + " rad)"),
          theta_(theta) {}
    [[nodiscard]] double theta() const { return theta_; }

private:
    double theta_;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ZeroAlpha : public Error {
public:
    explicit ZeroAlpha(double x) : Error("alpha vanishes at x = " + std::to_string(x)), x_(x) {}
    [[nodiscard]] double x() const { return x_; }

private:
    double x_;
};

class ZeroMaterial : public Error {
public:
    explicit ZeroMaterial(double x)
        : Error("relative permittivity or permeability vanishes at x = " + std::to_string(x)), x_(x) {}
    [[nodiscard]] double x() const { return x_; }

private:
    double x_;
};

class InvalidPermittivity : public Error {
public:
    using Error::Error;
};

/// M22 = 0 (or the Riccati solution blew up). Carries the blow-up position when known.
class SpectralSingularity : public Error {
public:
    explicit SpectralSingularity(std::string what, std::optional<double> x_blow = std::nullopt)
        : Error(std::move(what)), x_blow_(x_blow) {}
    [[nodiscard]] std::optional<double> x_blow() const { return x_blow_; }

private:
    std::optional<double> x_blow_;
};

class IntegrationFailure : public Error {
public:
    IntegrationFailure(const std::string& what, double x) : Error(what), x_(x) {}
    [[nodiscard]] double x() const { return x_; }

private:
    double x_;
};

class MMinusVanishes : public Error {
public:
    explicit MMinusVanishes(double x)
        : Error("m_minus vanishes at x = " + std::to_string(x) + "; dissect the interval"), x_(x) {}
    [[nodiscard]] double x() const { return x_; }

private:
    double x_;
};

class QMinusOne : public Error {
public:
    explicit QMinusOne(double x) : Error("Q(x) = -1 at x = " + std::to_string(x)), x_(x) {}
    [[nodiscard]] double x() const { return x_; }

private:
    double x_;
};

class QEqualsOne : public Error {
public:
    explicit QEqualsOne(double x) : Error("Q(x) = 1 at x = " + std::to_string(x)), x_(x) {}
    [[nodiscard]] double x() const { return x_; }

private:
    double x_;
};

class BranchAmbiguity : public Error {
public:
    using Error::Error;
};

}  // namespace strat
