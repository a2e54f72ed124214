// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "opext/rational.hpp"

namespace opext {

/// Positive weight sequence with constant tails: w_n = left_tail below the
/// core window, w_n = right_tail above it.  Rational so that products and
/// intertwining identities can be checked exactly.
struct WeightSeq {
    Rat left_tail{1};
    Rat right_tail{1};
    long core_offset = 0;
    std::vector<Rat> core;

    WeightSeq() = default;
    WeightSeq(Rat lt, std::vector<Rat> c, long offset, Rat rt)
        : left_tail(std::move(lt)), right_tail(std::move(rt)), core_offset(offset), core(std::move(c)) {
        validate();
    }

    static WeightSeq constant(const Rat& w) { return WeightSeq(w, {}, 0, w); }
    static WeightSeq step(const Rat& lo, const Rat& hi) { return WeightSeq(lo, {}, 0, hi); }

    void validate() const {
        if (left_tail <= 0 || right_tail <= 0)
            throw std::invalid_argument("WeightSeq: tails must be positive");
        for (const auto& w : core)
            if (w <= 0) throw std::invalid_argument("WeightSeq: core weights must be positive");
    }

    long core_lo() const { return core_offset; }
    long core_hi() const { return core_offset + static_cast<long>(core.size()); }  // one past

    Rat at(long n) const {
        if (n < core_lo()) return left_tail;
        if (n >= core_hi()) return right_tail;
        return core[static_cast<std::size_t>(n - core_offset)];
    }
    double at_d(long n) const { return to_double(at(n)); }

    Rat inf() const {
        Rat m = std::min(left_tail, right_tail);
        for (const auto& w : core) m = std::min(m, w);
        return m;
    }
    Rat sup() const {
        Rat m = std::max(left_tail, right_tail);
        for (const auto& w : core) m = std::max(m, w);
        return m;
    }

    /// sup over n < 0 (empty-left never happens: the left tail is always there)
    Rat sup_negative() const {
        Rat m = left_tail;
        for (long n = std::max(core_lo(), std::min(core_hi(), 0L) - static_cast<long>(core.size()) - 1); n < std::min(core_hi(), 0L); ++n)
            if (n >= core_lo()) m = std::max(m, at(n));
        return m;
    }

    /// inf over n >= 0
    Rat inf_nonnegative() const {
        Rat m = right_tail;
        for (long n = std::max(core_lo(), 0L); n < core_hi(); ++n) m = std::min(m, at(n));
        return m;
    }

    bool operator==(const WeightSeq& o) const {
        if (left_tail != o.left_tail || right_tail != o.right_tail) return false;
        long lo = std::min(core_lo(), o.core_lo()), hi = std::max(core_hi(), o.core_hi());
        for (long n = lo; n < hi; ++n)
            if (at(n) != o.at(n)) return false;
        return true;
    }
};

}  // namespace opext
