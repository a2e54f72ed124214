// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <complex>
#include <stdexcept>
#include <string>

namespace opext {

using Rat = mpq_class;
using cplx = std::complex<double>;

/// Exact conversion; every finite double is a dyadic rational.
inline Rat rat_of_double(double x) {
    Rat r(x);
    r.canonicalize();
    return r;
}

inline double to_double(const Rat& r) { return r.get_d(); }

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    mpz_class num = base.get_num(), den = base.get_den();
    if (e < 0) {
        if (num == 0) throw std::domain_error("rat_pow: zero to negative power");
        std::swap(num, den);
        e = -e;
    }
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(e));
    Rat r(n, d);
    r.canonicalize();
    return r;
}

/// Parses "p/q" or a plain integer string.
inline Rat rat_parse(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("rat_parse: bad rational '" + s + "'");
    r.canonicalize();
    if (r.get_den() == 0) throw std::invalid_argument("rat_parse: zero denominator");
    return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

/// True when the rational is exactly representable as a double
/// (dyadic denominator, small enough numerator).
inline bool rat_fits_double(const Rat& r) {
    double d = r.get_d();
    return rat_of_double(d) == r;
}

/// Complex number with exact rational parts; used where norms must be
/// reproduced bit-for-bit (comb evolution, intertwining checks).
struct RatC {
    Rat re{0}, im{0};

    RatC() = default;
    RatC(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    explicit RatC(const Rat& r) : re(r), im(0) {}

    RatC operator+(const RatC& o) const { return {re + o.re, im + o.im}; }
    RatC operator-(const RatC& o) const { return {re - o.re, im - o.im}; }
    RatC operator*(const Rat& s) const { return {re * s, im * s}; }
    bool operator==(const RatC& o) const { return re == o.re && im == o.im; }
    bool is_zero() const { return re == 0 && im == 0; }
    Rat abs2() const { return re * re + im * im; }
    cplx to_cplx() const { return {to_double(re), to_double(im)}; }
};

}  // namespace opext
