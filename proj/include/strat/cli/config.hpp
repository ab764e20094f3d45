#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "strat/designer.hpp"
#include "strat/profile.hpp"
#include "strat/xcheck.hpp"

namespace strat::cli {

/// Any problem with the configuration document (exit code 2).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line, std::string field)
        : std::runtime_error(what), line_(line), field_(std::move(field)) {}
    /// 1-based line in the document, 0 when unknown.
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

/// Malformed document, unknown key or wrongly typed value.
class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Well-formed but physically or logically invalid value.
class ValidationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Unreadable input or unwritable output (exit code 4).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { Scatter, Design, XCheck, Figure };

[[nodiscard]] std::string to_string(Command c);

struct DesignBlock {
    std::string family = "parabolic";  ///< parabolic | sinusoidal | tabulated
    double ell = 1.0;
    double a = 0.0;
    double kappa_ell = 1.0;            ///< parabolic
    Complex z{0.1, 0.0};               ///< sinusoidal
    int n = 1;                         ///< sinusoidal
    std::string q_file;                ///< tabulated: x, Re Q, Im Q
    std::optional<double> k_star;      ///< defaults: k⋆ℓ = 5 / |cosθ⋆|, or Kₙ/(2|cosθ⋆|) for sinusoidal
    double theta_star_deg = 180.0;
    Polarization polarization = Polarization::TE;
    design::DesignMode mode = design::DesignMode::TENonmagnetic;
    std::size_t samples = 2048;        ///< rows of the emitted profile table
    int line = 0;
};

struct ProfileSpec {
    /// vacuum | homogeneous | stack | linear_ramp | tabulated | design | random
    std::string type = "vacuum";
    double a = 0.0;
    double ell = 1.0;
    Complex eps{1.0, 0.0};
    Complex mu{1.0, 0.0};
    std::vector<Layer> layers;
    Material left, right;
    std::string file;
    bool edge_jump = false;
    std::optional<DesignBlock> design;
    std::uint64_t seed = 1;
    bool magnetic = false;
    int line = 0;
};

struct FigureBlock {
    std::vector<double> kappa_ell;                  ///< φ table abscissae
    std::vector<double> rl_kappa_ell;               ///< |Rˡ| table abscissae (defaults to kappa_ell)
    std::vector<double> kstar_ell{1.0, 5.0, 20.0};
    double theta_star_deg = 180.0;
};

struct XCheckBlock {
    bool suite = false;      ///< random smooth suite instead of the configured profile
    std::size_t count = 20;
};

struct RunConfig {
    Command command = Command::Scatter;
    ProfileSpec profile;
    Polarization polarization = Polarization::TE;
    std::vector<double> k{1.0};
    std::vector<double> theta_deg{0.0};
    std::vector<xcheck::Method> methods{xcheck::Method::Riccati};
    Tolerance tol;
    DesignBlock design;
    FigureBlock figure;
    XCheckBlock xcheck;
    std::string out_path;    ///< empty writes to stdout
    std::string format = "csv";
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// Parses a YAML document. The mode comes from `command:` or, when absent, from
/// whichever of the design/figure/xcheck blocks is present (scatter otherwise).
/// `forced` (the CLI subcommand) must agree with an explicit `command:`.
/// Throws ParseError or ValidationError.
[[nodiscard]] RunConfig parse_config(const std::string& text, std::optional<Command> forced = std::nullopt);

/// Re-checks cross-field constraints after command-line overrides. Throws ValidationError.
void validate(const RunConfig& cfg);

/// Reads whitespace- or comma-separated rows, skipping blanks and '#' comments.
/// Throws IoError when the file cannot be read and ParseError on malformed rows.
[[nodiscard]] std::vector<std::vector<double>> read_table(const std::string& path);

/// Builds the medium described by a profile block (loading sample tables as needed).
[[nodiscard]] MediumProfile build_profile(const ProfileSpec& spec);

/// Builds the design specification described by a design block.
[[nodiscard]] design::DesignSpec build_design(const DesignBlock& block);

}  // namespace strat::cli
