// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The cfmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfmimo/experiment.hpp"

namespace cfmimo {

/// Everything a run needs. Physical quantities use the units of the
/// reference scenario table (MHz, mW, meters, dB) at this boundary.
struct RunSettings {
    ExperimentConfig experiment;
    std::string output_dir = "cfmimo-out";
    double alpha = 1.0;    // priority applied to every UE
    double doppler = 0.0;  // Doppler value applied to every UE

    /// Experiment config with per-UE vectors filled in, validated.
    ExperimentConfig resolved() const;
};

/// Bad configuration input. `line` is 0 when the problem is not tied to a file line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Sets one key. Keys mirror the long command-line flags without dashes
/// prefix, e.g. "tau-up" or "carrier-mhz". Throws std::invalid_argument on
/// an unknown key or malformed value.
void apply_setting(RunSettings& s, const std::string& key, const std::string& value);

/// All recognised keys, in manifest order.
const std::vector<std::string>& setting_keys();

/// Reads flat `key = value` lines; `#` starts a comment, blank lines are
/// skipped. Errors carry "<source>:<line>: ..." and the line number.
void apply_config(RunSettings& s, std::istream& in, const std::string& source);
void apply_config_file(RunSettings& s, const std::string& path);

/// Serializes every key so that apply_config reproduces `s` exactly.
void write_settings(std::ostream& out, const RunSettings& s);

}  // namespace cfmimo
