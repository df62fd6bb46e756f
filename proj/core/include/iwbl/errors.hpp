/// @file errors.hpp
/// @brief Error taxonomy shared by the library and the CLI.
///
/// The CLI maps these onto process exit codes:
///   ConfigError    -> 2  (bad configuration / inconsistent grids / bad request)
///   DivergedError  -> 3  (iteration failed to converge / solution blew up)
///   IoError        -> 4  (snapshot or output file problems)
#pragma once

#include <stdexcept>
#include <string>

namespace iwbl {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct DivergedError : std::runtime_error {
    explicit DivergedError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace iwbl
