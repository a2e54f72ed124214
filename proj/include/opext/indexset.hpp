// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace opext {

enum class IndexKind { Naturals, Integers, Finite };

/// Index set of a sequence space: N, Z, or {0,...,n-1}.
struct IndexSet {
    IndexKind kind = IndexKind::Naturals;
    long n = 0;  // only for Finite

    static IndexSet naturals() { return {IndexKind::Naturals, 0}; }
    static IndexSet integers() { return {IndexKind::Integers, 0}; }
    static IndexSet finite(long n) {
        if (n < 1) throw std::invalid_argument("IndexSet::finite: n must be >= 1");
        return {IndexKind::Finite, n};
    }

    bool contains(long i) const {
        switch (kind) {
            case IndexKind::Naturals: return i >= 0;
            case IndexKind::Integers: return true;
            case IndexKind::Finite: return i >= 0 && i < n;
        }
        return false;
    }

    bool operator==(const IndexSet& o) const {
        return kind == o.kind && (kind != IndexKind::Finite || n == o.n);
    }

    std::string str() const {
        switch (kind) {
            case IndexKind::Naturals: return "naturals";
            case IndexKind::Integers: return "integers";
            case IndexKind::Finite: return "finite(" + std::to_string(n) + ")";
        }
        return "?";
    }
};

}  // namespace opext
