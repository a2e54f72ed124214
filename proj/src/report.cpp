// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "opext/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace opext::runner {

bool Report::all_pass() const {
    for (const auto& c : criteria)
        if (!c.pass) return false;
    return true;
}

json Report::to_json() const {
    json cr = json::array();
    for (const auto& c : criteria)
        cr.push_back(json{{"name", c.name},
                          {"value", c.value},
                          {"bound", c.bound},
                          {"relation", c.relation},
                          {"pass", c.pass}});
    return json{{"spec", spec_echo},
                {"criteria", cr},
                {"artifacts", artifacts},
                {"runtime_seconds", runtime_seconds}};
}

void atomic_write_text(const std::string& path, const std::string& text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("atomic_write_text: cannot open " + tmp);
        f << text;
        if (!f.good()) throw std::runtime_error("atomic_write_text: write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("atomic_write_text: rename failed for " + path);
}

void write_report(const Report& r, const std::string& path) {
    atomic_write_text(path, r.to_json().dump(2) + "\n");
}

std::string csv_escape(const std::string& field) {
    bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += "\"";
    return out;
}

void emit_table(const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows, const std::string& path) {
    std::string text;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) text += ",";
        text += csv_escape(header[i]);
    }
    text += "\r\n";
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw std::invalid_argument("emit_table: ragged row");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) text += ",";
            text += csv_escape(row[i]);
        }
        text += "\r\n";
    }
    atomic_write_text(path, text);
}

}  // namespace opext::runner
