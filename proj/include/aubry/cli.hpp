#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aubry/twistmap.hpp"

namespace aubry {

/// Every knob of the command-line pipelines. The INI form has sections
/// [map], [grid] and [run]; unset optionals are omitted.
struct RunConfig {
    FamilyKind family = FamilyKind::standard;
    double k = 0.0;
    double k2 = 0.0;

    std::optional<int> n_grid;
    std::optional<int> band_margin;
    int max_grid = 4096;
    long max_steps = 65536;

    std::string symbol = "golden";
    double budget = 0.02;
    std::optional<long> m;
    std::optional<long> n_dirichlet;
    std::string out;
    std::string format = "csv";

    double k_min = 0.5;
    double k_max = 1.5;
    int steps = 21;
    int refine = 0;
    std::string deltas = "0.01,0.001,0.0001";
    long p = 0;
    long q = 1;
    std::optional<double> k_prime;  ///< defaults to k + 0.05
    std::string cases;

    bool operator==(const RunConfig&) const = default;
};

std::string format_config(const RunConfig& cfg);
RunConfig parse_config(const std::string& ini_text);
RunConfig load_config(const std::string& path);

/// Shortest-safe round-trip form: 17 significant digits.
std::string format_double(double v);

/// Runs one subcommand; argv excludes the program name. Returns 0 on
/// success, 1 on a computational error, 2 on a usage error.
int parse_and_dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace aubry
