// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace opext::runner {

using json = nlohmann::ordered_json;

/// One machine-checkable criterion: pass is computed from value and bound
/// only (self-contained auditability).  relation is "<=" or ">=".
struct Criterion {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    std::string relation = "<=";
    bool pass = false;

    static Criterion le(std::string name, double value, double bound) {
        Criterion c{std::move(name), value, bound, "<=", value <= bound};
        return c;
    }
    static Criterion ge(std::string name, double value, double bound) {
        Criterion c{std::move(name), value, bound, ">=", value >= bound};
        return c;
    }
};

struct Report {
    json spec_echo;
    std::vector<Criterion> criteria;
    std::vector<std::string> artifacts;
    double runtime_seconds = 0.0;

    bool all_pass() const;
    json to_json() const;
};

/// Atomic write (temp file + rename), UTF-8.
void atomic_write_text(const std::string& path, const std::string& text);
void write_report(const Report& r, const std::string& path);

/// RFC-4180 CSV with a header row; numeric cells use shortest round-trip
/// decimals.  Cell values are strings already formatted by the caller.
void emit_table(const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows, const std::string& path);

std::string csv_escape(const std::string& field);

}  // namespace opext::runner
