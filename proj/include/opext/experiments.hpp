// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>

#include "opext/report.hpp"

namespace opext::runner {

struct ExperimentSpec {
    std::string name;
    json params = json::object();
    std::uint64_t seed = 1;
    std::map<std::string, double> tolerances;  // optional per-experiment overrides

    static ExperimentSpec from_json(const json& j);  // honors the OPEXT_SEED env override
    json to_json() const;
};

struct ExperimentDef {
    /// One-line statement of the verified property (unique per experiment).
    std::string statement;
    std::function<Report(const ExperimentSpec&, const std::string& outdir)> run;
};

/// Registry of named experiments, keyed by name (lexicographic iteration).
const std::map<std::string, ExperimentDef>& registry();

/// Dispatches to the named experiment; deterministic given (spec, seed).
Report run_experiment(const ExperimentSpec& spec, const std::string& outdir);

/// Stable sorted listing (name, statement).
std::vector<std::pair<std::string, std::string>> list_experiments();

}  // namespace opext::runner
