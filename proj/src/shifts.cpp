// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "opext/shifts.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "opext/parallel.hpp"

namespace opext::shifts {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// ln of the product of w over the inclusive index window [a, b]
double log_window_product(const WeightSeq& w, long a, long b) {
    double s = 0.0;
    long cl = w.core_lo(), ch = w.core_hi();
    long nleft = std::max(0L, std::min(b, cl - 1) - a + 1);
    long nright = std::max(0L, b - std::max(a, ch) + 1);
    s += nleft * std::log(to_double(w.left_tail));
    s += nright * std::log(to_double(w.right_tail));
    for (long j = std::max(a, cl); j <= std::min(b, ch - 1); ++j) s += std::log(w.at_d(j));
    return s;
}

}  // namespace

RidgeResult ridge_radii(const WeightSeq& w, long window_n) {
    RidgeResult r;
    r.r_minus = {to_double(w.left_tail), 0.0, "exact left-tail window limit (finite core washes out)"};
    r.i_plus = {to_double(w.right_tail), 0.0, "exact right-tail window limit (finite core washes out)"};
    r.window_n = window_n;

    // i_plus at finite n: inf over k > 0 of the n-window geometric mean.
    // Distinct values occur for k near the core; beyond it the window sits in
    // the right tail.
    double best_ip = std::numeric_limits<double>::infinity();
    long ch = w.core_hi(), cl = w.core_lo();
    for (long k = 1; k <= std::max(1L, ch); ++k)
        best_ip = std::min(best_ip, log_window_product(w, k, k + window_n - 1));
    r.window_i_plus = std::exp(best_ip / static_cast<double>(window_n));

    // r_minus at finite n: sup over k < 0 of the window [k-n, k-1] mean.
    // Windows with k <= cl sit entirely in the left tail.
    double best_rm = static_cast<double>(window_n) * std::log(to_double(w.left_tail));
    for (long k = cl + 1; k <= -1; ++k)
        best_rm = std::max(best_rm, log_window_product(w, k - window_n, k - 1));
    r.window_r_minus = std::exp(best_rm / static_cast<double>(window_n));
    return r;
}

std::pair<SpectrumDesc, SpectrumDesc> annulus_spectrum(const WeightSeq& w, const IndexSet& is) {
    require(is.kind == IndexKind::Integers,
            "annulus_spectrum: bilateral index set required (unilateral is outside the Ridge setting)");
    double lo = to_double(w.left_tail), hi = to_double(w.right_tail);
    std::vector<double> circles{lo};
    if (hi != lo) circles.push_back(hi);
    return {SpectrumDesc::circle_union(circles), SpectrumDesc::annulus(std::min(lo, hi), std::max(lo, hi))};
}

Rat GeomSeq::at(long n) const {
    if (n < lo) return core.front() * rat_pow(left_ratio, lo - n);
    if (n >= hi) return core.back() * rat_pow(right_ratio, n - hi + 1);
    return core[static_cast<std::size_t>(n - lo)];
}

Operator SplitResult::split_operator() const {
    return Operator::direct_sum({Operator::weighted_shift(alpha, IndexSet::integers()),
                                 Operator::weighted_shift(beta, IndexSet::integers())});
}

SplitResult split_hyperbolic(const WeightSeq& w, std::optional<Rat> sigma_opt, std::optional<Rat> tau_opt) {
    // normalization of the quasi-hyperbolic example: w_n >= 1 for n >= 0,
    // w_n < 1 for n < 0, and the window limits straddle the unit circle
    require(w.right_tail > 1, "split_hyperbolic: precondition r- < 1 < i+ violated (right tail <= 1)");
    require(w.left_tail < 1, "split_hyperbolic: precondition r- < 1 < i+ violated (left tail >= 1)");
    for (long n = w.core_lo(); n < w.core_hi(); ++n) {
        if (n >= 0) require(w.at(n) >= 1, "split_hyperbolic: normalization w_n >= 1 (n >= 0) violated");
        if (n < 0) require(w.at(n) < 1, "split_hyperbolic: normalization w_n < 1 (n < 0) violated");
    }

    Rat sup_neg = w.left_tail;
    for (long n = w.core_lo(); n < std::min(w.core_hi(), 0L); ++n) sup_neg = std::max(sup_neg, w.at(n));
    Rat sigma;
    if (sigma_opt) {
        sigma = *sigma_opt;
    } else {
        sigma = (Rat(1) + sup_neg) / 2;
        if (sigma < sup_neg) sigma = sup_neg;  // clamp the default only
    }
    Rat tau = tau_opt.value_or((Rat(1) + w.right_tail) / 2);
    require(sup_neg <= sigma && sigma < 1, "split_hyperbolic: need sup_{n<0} w_n <= sigma < 1");
    require(Rat(1) < tau && tau <= w.right_tail, "split_hyperbolic: need 1 < tau <= right tail");

    SplitResult s;
    s.w = w;
    s.sigma = sigma;
    s.tau = tau;

    // a_n = 1 (n <= 0), a_n = prod_{j=0}^{n-1} sigma/w_j (n > 0)
    long lo_a = std::min(w.core_lo(), 0L), hi_a = std::max(w.core_hi(), 1L) + 1;
    s.a.lo = lo_a;
    s.a.hi = hi_a;
    s.a.left_ratio = Rat(1);
    s.a.right_ratio = sigma / w.right_tail;
    Rat acc(1);
    for (long n = lo_a; n < hi_a; ++n) {
        if (n <= 0)
            s.a.core.push_back(Rat(1));
        else {
            acc = acc * (sigma / w.at(n - 1));
            s.a.core.push_back(acc);
        }
    }

    // b_n = 1 (n >= 0), b_n = prod_{j=n}^{-1} w_j/tau (n < 0)
    long lo_b = std::min(w.core_lo(), 0L) - 1, hi_b = std::max(w.core_hi(), 1L);
    s.b.lo = lo_b;
    s.b.hi = hi_b;
    s.b.left_ratio = w.left_tail / tau;  // b_{n-1} = b_n * (w_{n-1}/tau)
    s.b.right_ratio = Rat(1);
    std::vector<Rat> btmp;
    acc = Rat(1);
    for (long n = hi_b - 1; n >= lo_b; --n) {
        if (n >= 0)
            btmp.push_back(Rat(1));
        else {
            acc = acc * (w.at(n) / tau);
            btmp.push_back(acc);
        }
    }
    s.b.core.assign(btmp.rbegin(), btmp.rend());

    // alpha_n = sigma (n >= 0), w_n (n < 0); beta_n = tau (n < 0), w_n (n >= 0)
    long clo = std::min(w.core_lo(), 0L), chi = std::max(w.core_hi(), 0L);
    std::vector<Rat> acore, bcore;
    for (long n = clo; n < chi; ++n) {
        acore.push_back(n >= 0 ? sigma : w.at(n));
        bcore.push_back(n < 0 ? tau : w.at(n));
    }
    s.alpha = WeightSeq(w.left_tail, acore, clo, sigma);
    s.beta = WeightSeq(tau, bcore, clo, w.right_tail);
    s.kappa1 = 1.0;
    s.kappa2 = 2.0;
    return s;
}

long intertwining_check_exact(const SplitResult& s, long nmax) {
    long count = 0;
    for (long n = -nmax; n <= nmax; ++n) {
        Rat lhs_a = s.alpha.at(n) * s.a.at(n);
        Rat rhs_a = s.w.at(n) * s.a.at(n + 1);
        Rat lhs_b = s.beta.at(n) * s.b.at(n);
        Rat rhs_b = s.w.at(n) * s.b.at(n + 1);
        if (lhs_a != rhs_a || lhs_b != rhs_b)
            throw std::runtime_error("intertwining_check_exact: identity failed at n = " + std::to_string(n));
        count += 2;
    }
    return count;
}

CertifiedValue circle_resolvent_norm(const WeightSeq& w, cplx lambda) {
    double al = std::abs(lambda);
    double lo = to_double(w.left_tail), hi = to_double(w.right_tail);
    long cl = w.core_lo(), ch = w.core_hi();

    if (std::max(lo, hi) < al) {
        // outer series: column sums col(n) = 1/|l| + (w_n/|l|) col(n+1)
        double limit_right = 1.0 / (al - hi);
        double col = limit_right;
        double sup = limit_right;
        for (long n = ch - 1; n >= cl - 1; --n) {
            col = (1.0 + w.at_d(n) * col) / al;
            sup = std::max(sup, col);
        }
        double limit_left = 1.0 / (al - lo);
        sup = std::max(sup, limit_left);
        return {sup, 1e-13 * sup, "exact l1 column sums, outer Neumann series"};
    }
    if (std::min(lo, hi) > al) {
        // inner series: col(n) = (1/w_{n-1}) (1 + |l| col(n-1))
        double limit_left = 1.0 / (lo - al);
        double col = limit_left;
        double sup = limit_left;
        for (long n = cl + 1; n <= ch + 1; ++n) {
            col = (1.0 + al * col) / w.at_d(n - 1);
            sup = std::max(sup, col);
        }
        double limit_right = 1.0 / (hi - al);
        sup = std::max(sup, limit_right);
        return {sup, 1e-13 * sup, "exact l1 column sums, inverse-power series"};
    }
    throw std::domain_error("circle_resolvent_norm: no certified spectral gap at |lambda| (tails straddle it)");
}

std::vector<double> circle_norm_sweep(const Operator& S, const std::vector<cplx>& lambdas, bool parallel) {
    require(S.kind == Operator::Kind::DirectSum, "circle_norm_sweep: DirectSum operator required");
    for (const auto& part : S.parts)
        require(part.kind == Operator::Kind::WeightedShift && part.iset.kind == IndexKind::Integers,
                "circle_norm_sweep: summands must be bilateral weighted shifts");
    return map_indexed(lambdas.size(), parallel, [&](std::size_t i) {
        double v = 0.0;
        for (const auto& part : S.parts) v = std::max(v, circle_resolvent_norm(part.weights, lambdas[i]).upper());
        return v;
    });
}

CertifiedValue resolvent_sup_on_circle(const Operator& S, int m, double tol, bool parallel) {
    require(m >= 1, "resolvent_sup_on_circle: grid size >= 1");
    std::vector<cplx> grid(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        double th = 2.0 * M_PI * j / m;
        grid[static_cast<std::size_t>(j)] = cplx(std::cos(th), std::sin(th));
    }
    std::vector<double> vals = circle_norm_sweep(S, grid, parallel);
    double sup = 0.0, inf = std::numeric_limits<double>::infinity();
    for (double v : vals) {
        sup = std::max(sup, v);
        inf = std::min(inf, v);
    }
    // The exact l1 column sums depend only on |lambda|, so the norm is
    // constant on the circle and the grid sup is the true sup; the values
    // are required to coincide, otherwise the resolvent-identity Lipschitz
    // modulus covers the arcs between grid points.
    double gridrad = 0.0;
    if (sup - inf > 1e-12 * sup) {
        double delta = std::sin(M_PI / m);
        double q = delta * sup;
        if (q >= 1.0)
            throw std::domain_error("resolvent_sup_on_circle: gap too small for the grid modulus bound");
        gridrad = (sup - inf) + sup * q / (1.0 - q);
    }
    return {sup, tol + gridrad + 1e-12 * sup,
            "grid sup of exact column-sum norms; modulus-invariant on the circle"};
}

CertifiedValue qh_constant(const WeightSeq& w, std::optional<Rat> sigma, std::optional<Rat> tau, int grid,
                           double tol) {
    SplitResult s = split_hyperbolic(w, sigma, tau);
    CertifiedValue sup = resolvent_sup_on_circle(s.split_operator(), grid, tol);
    double c = (s.kappa1 / s.kappa2) / sup.upper();
    return {c, 0.0,
            "certified lower bound: ||(T_w - l)x|| >= (k1/k2) / sup_T ||R(., T_a (+) T_b)|| via the splitting"};
}

double section_min_singular(const WeightSeq& w, cplx lambda, int size) {
    require(size >= 2, "section_min_singular: size >= 2");
    // rectangular section: columns n in [lo, lo+size), all rows kept, so that
    // ||(T_w - lambda) x|| is computed exactly for window-supported x (no
    // spurious boundary kernels).  The Gram matrix is Hermitian tridiagonal
    // and its eigenvalues depend only on the moduli of the off-diagonals.
    long lo = -static_cast<long>(size) / 2;
    double al = std::abs(lambda);
    Eigen::VectorXd diag(size), sub(size - 1);
    for (int i = 0; i < size; ++i) {
        double wi = w.at_d(lo + i);
        diag(i) = al * al + wi * wi;
    }
    for (int i = 0; i + 1 < size; ++i) sub(i) = w.at_d(lo + i) * al;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    double mn = es.eigenvalues()(0);
    return std::sqrt(std::max(0.0, mn));
}

std::vector<double> section_minsv_sweep(const WeightSeq& w, const std::vector<cplx>& lambdas, int size,
                                        bool parallel) {
    return map_indexed(lambdas.size(), parallel,
                       [&](std::size_t i) { return section_min_singular(w, lambdas[i], size); });
}

std::pair<std::vector<SweepRecord>, KFit> kconjecture_sweep(
    const std::vector<std::pair<std::string, WeightSeq>>& family, int grid, double tol) {
    std::vector<SweepRecord> recs;
    for (const auto& [id, w] : family) {
        SplitResult s = split_hyperbolic(w);
        CertifiedValue sup = resolvent_sup_on_circle(s.split_operator(), grid, tol);
        SweepRecord r;
        r.family_id = id;
        r.K_emp = sup.value;
        r.c = (s.kappa1 / s.kappa2) / sup.upper();
        r.Mtilde = std::max(2.0, to_double(w.sup()));
        recs.push_back(r);
    }
    KFit fit;
    if (recs.size() < 3) {
        fit.ok = false;
        fit.report = "fit refused: family has fewer than 3 members";
        return {recs, fit};
    }
    // least squares: log K = log a + b * x, x = (1/c) log Mtilde
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    auto n = static_cast<double>(recs.size());
    for (const auto& r : recs) {
        double x = std::log(r.Mtilde) / r.c, y = std::log(r.K_emp);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) {
        fit.ok = false;
        fit.report = "fit refused: degenerate design (identical (1/c) log Mtilde values)";
        return {recs, fit};
    }
    fit.b = (n * sxy - sx * sy) / denom;
    fit.a = std::exp((sy - fit.b * sx) / n);
    fit.max_ratio = 1.0;
    for (const auto& r : recs) {
        double pred = fit.a * std::pow(r.Mtilde, fit.b / r.c);
        fit.max_ratio = std::max(fit.max_ratio, std::max(r.K_emp / pred, pred / r.K_emp));
    }
    fit.ok = true;
    fit.report = "least-squares fit of log K_emp against (1/c) log Mtilde; max ratio " +
                 std::to_string(fit.max_ratio);
    return {recs, fit};
}

}  // namespace opext::shifts
