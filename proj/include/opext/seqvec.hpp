// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>
#include <stdexcept>

#include "opext/indexset.hpp"
#include "opext/rational.hpp"

namespace opext {

enum class NormP { One, Two, Sup };

inline double norm_exponent(NormP p) {
    switch (p) {
        case NormP::One: return 1.0;
        case NormP::Two: return 2.0;
        case NormP::Sup: return 0.0;
    }
    return 2.0;
}

/// Finitely supported vector over an index set, with a declared l_p norm.
/// Vectors in composite spaces (direct sums, extension towers) carry several
/// blocks; plain sequence-space vectors live in block 0.  Stored entries are
/// always nonzero.
struct SeqVector {
    struct Block {
        IndexSet iset;
        std::map<long, cplx> entries;
    };

    NormP p = NormP::Two;
    std::map<int, Block> blocks;

    SeqVector() = default;
    explicit SeqVector(NormP np) : p(np) {}

    static SeqVector zero(IndexSet iset, NormP p) {
        SeqVector v(p);
        v.blocks[0].iset = iset;
        return v;
    }

    static SeqVector basis(IndexSet iset, long n, NormP p, cplx coef = 1.0) {
        SeqVector v = zero(iset, p);
        v.set(0, n, coef);
        return v;
    }

    bool single_block() const {
        return blocks.size() <= 1 && (blocks.empty() || blocks.begin()->first == 0);
    }

    cplx coeff(int block, long n) const {
        auto b = blocks.find(block);
        if (b == blocks.end()) return 0.0;
        auto it = b->second.entries.find(n);
        return it == b->second.entries.end() ? cplx(0.0) : it->second;
    }
    cplx coeff(long n) const { return coeff(0, n); }

    void set(int block, long n, cplx z) {
        auto& b = blocks[block];
        if (!b.iset.contains(n) && b.iset.kind != IndexKind::Integers)
            b.iset = IndexSet::integers();  // widen lazily for scratch vectors
        if (z == cplx(0.0))
            b.entries.erase(n);
        else
            b.entries[n] = z;
    }
    void set(long n, cplx z) { set(0, n, z); }

    void add(int block, long n, cplx z) { set(block, n, coeff(block, n) + z); }
    void add(long n, cplx z) { add(0, n, z); }

    void set_block_iset(int block, IndexSet iset) { blocks[block].iset = iset; }

    std::size_t support_size() const {
        std::size_t s = 0;
        for (const auto& [k, b] : blocks) s += b.entries.size();
        return s;
    }

    /// Extracts one block as a stand-alone single-block vector.
    SeqVector block_vector(int block) const {
        SeqVector v(p);
        auto it = blocks.find(block);
        if (it != blocks.end()) v.blocks[0] = it->second;
        return v;
    }

    void put_block(int block, const SeqVector& single) {
        if (!single.single_block()) throw std::invalid_argument("put_block: expects single block");
        if (!single.blocks.empty() && !single.blocks.begin()->second.entries.empty())
            blocks[block] = single.blocks.begin()->second;
        else if (!single.blocks.empty())
            blocks[block].iset = single.blocks.begin()->second.iset;
    }

    SeqVector& operator+=(const SeqVector& o) {
        for (const auto& [k, b] : o.blocks)
            for (const auto& [n, z] : b.entries) add(k, n, z);
        return *this;
    }
    SeqVector& operator-=(const SeqVector& o) {
        for (const auto& [k, b] : o.blocks)
            for (const auto& [n, z] : b.entries) add(k, n, -z);
        return *this;
    }
    SeqVector& operator*=(cplx s) {
        if (s == cplx(0.0)) {
            for (auto& [k, b] : blocks) b.entries.clear();
            return *this;
        }
        for (auto& [k, b] : blocks)
            for (auto& [n, z] : b.entries) z *= s;
        return *this;
    }

    friend SeqVector operator+(SeqVector a, const SeqVector& b) { return a += b; }
    friend SeqVector operator-(SeqVector a, const SeqVector& b) { return a -= b; }
    friend SeqVector operator*(cplx s, SeqVector v) { return v *= s; }
};

/// Exact l_p norm of a finitely supported vector (flat across blocks; the
/// block norm of an l_p-direct sum with matching exponent is the flat norm).
inline double lp_norm(const SeqVector& v) {
    double acc = 0.0;
    for (const auto& [k, b] : v.blocks) {
        for (const auto& [n, z] : b.entries) {
            double a = std::abs(z);
            switch (v.p) {
                case NormP::One: acc += a; break;
                case NormP::Two: acc += a * a; break;
                case NormP::Sup: acc = std::max(acc, a); break;
            }
        }
    }
    return v.p == NormP::Two ? std::sqrt(acc) : acc;
}

/// l2 inner product <u, v> (conjugate-linear in the second slot is NOT used;
/// convention here: sum u_n * conj(v_n)).
inline cplx inner(const SeqVector& u, const SeqVector& v) {
    cplx s = 0.0;
    for (const auto& [k, b] : u.blocks) {
        for (const auto& [n, z] : b.entries) s += z * std::conj(v.coeff(k, n));
    }
    return s;
}

inline double max_abs_diff(const SeqVector& a, const SeqVector& b) {
    double m = 0.0;
    for (const auto& [k, blk] : a.blocks)
        for (const auto& [n, z] : blk.entries) m = std::max(m, std::abs(z - b.coeff(k, n)));
    for (const auto& [k, blk] : b.blocks)
        for (const auto& [n, z] : blk.entries) m = std::max(m, std::abs(z - a.coeff(k, n)));
    return m;
}

}  // namespace opext
