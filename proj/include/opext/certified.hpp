// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace opext {

/// A scalar with a rigorous enclosure: the true quantity lies in
/// [value - radius, value + radius] whenever the producing operation's
/// preconditions hold.
struct CertifiedValue {
    double value = 0.0;
    double radius = 0.0;
    std::string note;

    CertifiedValue() = default;
    CertifiedValue(double v, double r, std::string n) : value(v), radius(r), note(std::move(n)) {
        if (radius < 0) throw std::invalid_argument("CertifiedValue: negative radius");
    }

    double upper() const { return value + radius; }
    double lower() const { return value - radius; }
};

}  // namespace opext
