/*
   Copyright 2026 The emergent authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

/**
 * @file cli.hpp
 * @brief Experiment files, run reports and the two commands behind the `emergent` tool.
 *
 * An experiment file is sectioned key = value text:
 *
 *     [grid]            sizes, spacing
 *     [operator.NAME]   kind = stencil (terms, scheme) | symbol (values)
 *     [theory.NAME]     kind = scaling | monomial | polynomial | sum | compose | scaled
 *     [emergence]       target, ambient, strategy
 *     [run]             samples, seed, tol, map_samples
 *
 * Lines starting with '#' are comments. docs/config.md describes every key.
 */

#ifndef EMERGENT_CLI_HPP
#define EMERGENT_CLI_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "emergence.hpp"
#include "oracle.hpp"

namespace emergent::cli {

inline constexpr const char* engine_version = "0.1.0";

enum class Strategy { combinator, oracle, both };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

/// Malformed or inconsistent experiment file; maps to exit code 1.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    Grid grid;
    std::map<std::string, Operator> operators{};
    std::map<std::string, Theory> theories{};
    std::string target{};
    std::string ambient{};
    Strategy strategy = Strategy::combinator;
    int samples = 100;
    std::uint64_t seed = 0;
    std::optional<double> tol{};
    int map_samples = 8;
    /// FNV-1a of the file text, hex encoded.
    std::string digest{};

    const Theory& target_theory() const { return theories.at(target); }
    const Theory& ambient_theory() const { return theories.at(ambient); }
};

/// Throws ConfigError with line numbers on malformed input and names dangling references.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Accepts "2", "-0.5", "3i", "1+2i", "1.5e-3-2i".
Complex parse_complex(const std::string& text);

std::string fnv1a_hex(const std::string& text);

enum ExitCode { exit_verified = 0, exit_usage = 1, exit_failed = 2 };

struct RunOutcome {
    nlohmann::json report;
    int exit_code = exit_failed;
    std::string summary;
};

RunOutcome cmd_synthesize(const ExperimentConfig& cfg);

/// Re-checks the map table of a previous report with fresh fields; the parameters come only
/// from the table. Throws ConfigError when the table is empty or unusable.
RunOutcome cmd_verify(const ExperimentConfig& cfg, const nlohmann::json& prior);

/// The report without its "timing" entry, as compared by determinism checks.
nlohmann::json report_body(const nlohmann::json& report);

/// Entry point of the command-line tool.
int run(int argc, char** argv);

}  // namespace emergent::cli

#endif  // EMERGENT_CLI_HPP
