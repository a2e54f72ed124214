// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "opext/decompose.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace opext::semi {

namespace {

// The sum-of-norms program is solved in real coordinates: each complex block
// z_i in C^{d_i} is embedded as (Re z_i; Im z_i) in R^{2 d_i}, the smoothed
// objective sum_i gamma_i sqrt(||z_i||^2 + mu^2) is minimized by damped
// Newton on an affine parametrization z = z0 + N u of the constraint plane,
// and the dual point is read off the gradient at the smoothed optimum (where
// it is automatically dual feasible, giving a machine-precision gap).

Eigen::MatrixXd real_block(const Eigen::MatrixXcd& M) {
    Eigen::MatrixXd R(2 * M.rows(), 2 * M.cols());
    R.topLeftCorner(M.rows(), M.cols()) = M.real();
    R.topRightCorner(M.rows(), M.cols()) = -M.imag();
    R.bottomLeftCorner(M.rows(), M.cols()) = M.imag();
    R.bottomRightCorner(M.rows(), M.cols()) = M.real();
    return R;
}

struct SumNormProblem {
    std::vector<long> off;  // real offset per block
    std::vector<long> dim;  // real dimension per block
    std::vector<double> gamma;
    Eigen::MatrixXd C;  // real stacked constraint, 2m x 2T
    Eigen::VectorXd b;  // real right-hand side

    long total() const { return off.empty() ? 0 : off.back() + dim.back(); }

    double cost(const Eigen::VectorXd& z) const {
        double c = 0.0;
        for (std::size_t i = 0; i < gamma.size(); ++i) c += gamma[i] * z.segment(off[i], dim[i]).norm();
        return c;
    }

    double smooth_value(const Eigen::VectorXd& z, double mu, Eigen::VectorXd* grad) const {
        double v = 0.0;
        if (grad) grad->setZero(total());
        for (std::size_t i = 0; i < gamma.size(); ++i) {
            auto zi = z.segment(off[i], dim[i]);
            double s = std::sqrt(zi.squaredNorm() + mu * mu);
            v += gamma[i] * (s - mu);
            if (grad) grad->segment(off[i], dim[i]) = (gamma[i] / s) * zi;
        }
        return v;
    }
};

SumNormProblem realize(const std::vector<Eigen::MatrixXcd>& B, const std::vector<double>& gammas,
                       const Eigen::VectorXcd& bc) {
    SumNormProblem p;
    long m = B.at(0).rows(), total = 0;
    for (const auto& Bi : B) {
        if (Bi.rows() != m) throw std::invalid_argument("min_sum_norms: inconsistent block rows");
        p.off.push_back(total);
        p.dim.push_back(2 * Bi.cols());
        total += 2 * Bi.cols();
    }
    p.gamma = gammas;
    p.C.resize(2 * m, total);
    for (std::size_t i = 0; i < B.size(); ++i) p.C.middleCols(p.off[i], p.dim[i]) = real_block(B[i]);
    p.b.resize(2 * m);
    p.b << bc.real(), bc.imag();
    return p;
}

// damped Newton with smoothing continuation on z = z0 + N u
Eigen::VectorXd smoothed_newton(const SumNormProblem& p, const Eigen::VectorXd& z0,
                                const Eigen::MatrixXd& N, double scale, long* iters, long max_iters) {
    long K = N.cols();
    Eigen::VectorXd u = Eigen::VectorXd::Zero(K);
    if (K == 0) return z0;
    Eigen::VectorXd z = z0, grad(p.total());
    for (double mu = 0.5 * scale; mu > 1e-13 * scale; mu *= 0.12) {
        for (int it = 0; it < 60; ++it) {
            if (*iters >= max_iters) return z0 + N * u;
            ++*iters;
            z = z0 + N * u;
            double f0 = p.smooth_value(z, mu, &grad);
            Eigen::VectorXd gu = N.transpose() * grad;
            if (gu.lpNorm<Eigen::Infinity>() <= 1e-15 * std::max(1.0, scale)) break;
            // Hessian is block diagonal: H_i = gamma_i (I/s - zi zi^T / s^3)
            Eigen::MatrixXd Hu = Eigen::MatrixXd::Zero(K, K);
            for (std::size_t i = 0; i < p.gamma.size(); ++i) {
                auto zi = z.segment(p.off[i], p.dim[i]);
                double s = std::sqrt(zi.squaredNorm() + mu * mu);
                Eigen::MatrixXd Ni = N.middleRows(p.off[i], p.dim[i]);
                Eigen::VectorXd w = Ni.transpose() * zi;
                Hu.noalias() += (p.gamma[i] / s) * (Ni.transpose() * Ni);
                Hu.noalias() -= (p.gamma[i] / (s * s * s)) * (w * w.transpose());
            }
            Hu.diagonal().array() += 1e-13 * std::max(1.0, Hu.trace() / K);
            Eigen::VectorXd du = Hu.ldlt().solve(-gu);
            double t = 1.0;
            for (int ls = 0; ls < 40; ++ls) {
                double f1 = p.smooth_value(z0 + N * (u + t * du), mu, nullptr);
                if (f1 <= f0 + 1e-4 * t * gu.dot(du)) break;
                t *= 0.5;
            }
            u += t * du;
            if ((t * du).lpNorm<Eigen::Infinity>() <= 1e-15 * std::max(1.0, u.lpNorm<Eigen::Infinity>()))
                break;
        }
    }
    return z0 + N * u;
}

// dual-feasible bound from the gradient at the (near-)optimal point
double dual_bound_at(const SumNormProblem& p, const Eigen::VectorXd& z, double mu) {
    Eigen::VectorXd grad(p.total());
    p.smooth_value(z, mu, &grad);
    // least squares C^T y ~ grad
    Eigen::VectorXd y =
        (p.C * p.C.transpose()).ldlt().solve(p.C * grad);
    double s = 0.0;
    for (std::size_t i = 0; i < p.gamma.size(); ++i) {
        if (p.gamma[i] <= 0) continue;
        double nb = (p.C.middleCols(p.off[i], p.dim[i]).transpose() * y).norm();
        s = std::max(s, nb / p.gamma[i]);
    }
    if (s > 1.0) y /= s;
    return y.dot(p.b);
}

SumNormSolution solve_on_affine(const SumNormProblem& p, const Eigen::VectorXd& z0,
                                const Eigen::MatrixXd& N, const SolverOpts& opts,
                                const std::vector<Eigen::MatrixXcd>& B) {
    double scale = std::max(1.0, p.b.norm());
    long iters = 0;
    Eigen::VectorXd z = smoothed_newton(p, z0, N, scale, &iters, opts.max_iters);

    SumNormSolution sol;
    sol.iterations = iters;
    sol.cost = p.cost(z);
    sol.feas_residual = (p.C * z - p.b).norm();
    sol.dual_bound = std::max(dual_bound_at(p, z, 1e-13 * scale), dual_bound_at(p, z, 1e-9 * scale));
    sol.gap = sol.cost - sol.dual_bound;
    sol.converged = sol.gap <= opts.gap_tol * (1.0 + sol.cost) &&
                    sol.feas_residual <= 1e-8 * std::max(1.0, scale);
    sol.z.resize(B.size());
    for (std::size_t i = 0; i < B.size(); ++i) {
        long d = B[i].cols();
        Eigen::VectorXd zi = z.segment(p.off[i], p.dim[i]);
        sol.z[i].resize(d);
        for (long k = 0; k < d; ++k) sol.z[i](k) = cplx(zi(k), zi(d + k));
    }
    return sol;
}

}  // namespace

SumNormSolution min_sum_norms(const std::vector<Eigen::MatrixXcd>& B, const std::vector<double>& gammas,
                              const Eigen::VectorXcd& bc, const SolverOpts& opts) {
    if (B.empty() || B.size() != gammas.size())
        throw std::invalid_argument("min_sum_norms: blocks and weights must match");
    SumNormProblem p = realize(B, gammas, bc);

    // feasibility via projection: least-norm point and an orthonormal basis
    // of the constraint null space
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(p.C, Eigen::ComputeThinU | Eigen::ComputeFullV);
    double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    long rank = 0;
    for (long i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-13 * std::max(1.0, smax)) ++rank;
    Eigen::VectorXd ub = svd.matrixU().transpose() * p.b;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(svd.singularValues().size());
    for (long i = 0; i < rank; ++i) w(i) = ub(i) / svd.singularValues()(i);
    Eigen::VectorXd z0 = svd.matrixV().leftCols(svd.singularValues().size()) * w;
    if ((p.C * z0 - p.b).norm() > 1e-8 * std::max(1.0, p.b.norm()))
        throw std::domain_error("min_sum_norms: constraint infeasible");
    Eigen::MatrixXd N = svd.matrixV().rightCols(p.total() - rank);

    return solve_on_affine(p, z0, N, opts, B);
}

DecompositionSolution decomposition_cost(const SemigroupModel& sg, std::vector<double> times, double t,
                                         const Eigen::VectorXcd& x, const GammaFn& gamma, bool discrete,
                                         const SolverOpts& opts) {
    if (sg.kind != SemigroupModel::Kind::MatrixExp)
        throw std::invalid_argument("decomposition_cost: MatrixExp model required (comb uses its own entry)");
    if (times.empty()) throw std::invalid_argument("decomposition_cost: at least one time required");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (times[i] > times[i + 1]) throw std::invalid_argument("decomposition_cost: times must be sorted");
    if (times.front() < 0 || times.back() > t + 1e-12)
        throw std::invalid_argument("decomposition_cost: need 0 <= t_1 <= ... <= t_n <= t");

    auto Tmat = [&](double s) {
        if (!discrete) return evolve_matrix(sg.A, s);
        double r = std::round(s);
        if (std::abs(s - r) > 1e-9)
            throw std::invalid_argument("decomposition_cost: discrete mode needs integer times");
        Eigen::MatrixXcd U = evolve_matrix(sg.A, 1.0);
        Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(U.rows(), U.cols());
        for (long k = 0; k < static_cast<long>(r); ++k) P = P * U;
        return P;
    };

    std::vector<Eigen::MatrixXcd> B;
    std::vector<double> g;
    for (double ti : times) {
        B.push_back(Tmat(ti));
        g.push_back(gamma(t - ti));
    }
    Eigen::VectorXcd bvec = Tmat(t) * x;

    DecompositionSolution out;
    out.times = times;

    SumNormSolution sol;
    if (times.size() == 1 && std::abs(times.back() - t) < 1e-12) {
        // x_1 is forced by injectivity of T(t)
        out.witnesses = {x};
        out.cost = g[0] * x.norm();
        out.dual_bound = out.cost;
        out.gap = 0.0;
        out.converged = true;
        out.condition_a = out.cost >= x.norm() - 1e-12;
        return out;
    }

    SumNormProblem p = realize(B, g, bvec);
    if (std::abs(times.back() - t) < 1e-12) {
        // exact elimination of the last witness: z_n = x - sum_{i<n} E_i z_i
        // with E_i = T(t_i - t); the affine parametrization keeps the
        // constraint satisfied identically
        std::size_t n = times.size();
        long d = x.size();
        Eigen::VectorXd z0 = Eigen::VectorXd::Zero(p.total());
        z0.segment(p.off[n - 1], d) = x.real();
        z0.segment(p.off[n - 1] + d, d) = x.imag();
        Eigen::MatrixXd N = Eigen::MatrixXd::Zero(p.total(), static_cast<long>(n - 1) * 2 * d);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            Eigen::MatrixXcd E = discrete ? Eigen::MatrixXcd(B.back().partialPivLu().solve(B[i]))
                                          : evolve_matrix(-sg.A, t - times[i]);
            N.block(p.off[i], static_cast<long>(i) * 2 * d, 2 * d, 2 * d).setIdentity();
            N.block(p.off[n - 1], static_cast<long>(i) * 2 * d, 2 * d, 2 * d) = -real_block(E);
        }
        sol = solve_on_affine(p, z0, N, opts, B);
    } else {
        sol = min_sum_norms(B, g, bvec, opts);
    }

    if (!sol.converged)
        throw std::runtime_error("decomposition_cost: solver gap not reached within the budget");
    out.witnesses = sol.z;
    out.cost = sol.cost;
    out.dual_bound = sol.dual_bound;
    out.gap = sol.gap;
    out.feas_residual = sol.feas_residual;
    out.converged = sol.converged;
    out.condition_a = sol.dual_bound >= x.norm() - 1e-9 * std::max(1.0, x.norm());
    return out;
}

// ---------------------------------------------------------------------------
// comb blow-up certificate
// ---------------------------------------------------------------------------

CombBlowupResult comb_blowup_certificate(const CombParams& p, const CombFunction& f,
                                         const SolverOpts& opts) {
    // precondition: support on {0} x (0, k_eps) (= axis level 1); the program
    // is positively homogeneous, so f is normalized to unit norm here
    for (const auto& [cell, z] : f.coef)
        if (!(cell.axis && cell.a == 1))
            throw std::invalid_argument("comb_blowup_certificate: f must be supported on {0} x (0, k_eps)");
    double fn = comb_norm(p, f);
    if (fn <= 0.0) throw std::invalid_argument("comb_blowup_certificate: f must be nonzero");

    long k = p.k_eps;
    std::vector<long> steps;  // times in units of k: {0} U {k - i : i = 1..k}
    steps.push_back(0);
    for (long i = 1; i <= k; ++i)
        if (k - i > 0) steps.push_back(k - i);
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());

    CombFunction target = comb_evolve(p, f, Rat(k) * p.h);

    // witness supports: cells that can reach a target cell within n steps
    auto reach = [&](const CombCell& z, long n) -> std::optional<CombCell> {
        if (!z.axis) {
            if (z.b - n >= 1) return CombCell::tooth(z.a, z.b - n);
            long L = z.a - (n - z.b);
            if (L >= 1 && z.b <= n) return CombCell::axis_level(L);
            return std::nullopt;
        }
        if (z.a - n >= 1) return CombCell::axis_level(z.a - n);
        return std::nullopt;
    };
    std::vector<std::vector<CombCell>> support(steps.size());
    for (std::size_t si = 0; si < steps.size(); ++si) {
        std::set<CombCell> sup;
        for (const auto& zc : target.coef) {
            auto src = reach(zc.first, steps[si]);
            if (src) sup.insert(*src);
        }
        support[si].assign(sup.begin(), sup.end());
    }

    // rows: union of target support and every image cell of every witness cell
    std::set<CombCell> rowset;
    for (const auto& zc : target.coef) rowset.insert(zc.first);
    for (std::size_t si = 0; si < steps.size(); ++si)
        for (const auto& cell : support[si]) {
            CombFunction probe;
            probe.add(cell, RatC(Rat(1)));
            for (const auto& img : comb_evolve(p, probe, Rat(steps[si]) * p.h).coef) rowset.insert(img.first);
        }
    std::vector<CombCell> rows(rowset.begin(), rowset.end());
    std::map<CombCell, long> rowidx;
    for (std::size_t r = 0; r < rows.size(); ++r) rowidx[rows[r]] = static_cast<long>(r);

    double sqh = std::sqrt(to_double(p.h));
    auto wcell = [&](const CombCell& cell) { return std::sqrt(to_double(cell_weight2(p, cell))); };

    // blocks in scaled coordinates xi = coef * w * sqrt(h): per witness column
    // cell, the image cells receive coef = xi / (w sqrt(h))
    std::vector<Eigen::MatrixXcd> B(steps.size());
    for (std::size_t si = 0; si < steps.size(); ++si) {
        Eigen::MatrixXcd Bi = Eigen::MatrixXcd::Zero(static_cast<long>(rows.size()),
                                                     static_cast<long>(support[si].size()));
        for (std::size_t ci = 0; ci < support[si].size(); ++ci) {
            CombFunction probe;
            probe.add(support[si][ci], RatC(Rat(1)));
            CombFunction img = comb_evolve(p, probe, Rat(steps[si]) * p.h);
            for (const auto& [cell, coefz] : img.coef)
                Bi(rowidx.at(cell), static_cast<long>(ci)) =
                    coefz.to_cplx() / (wcell(support[si][ci]) * sqh);
        }
        B[si] = Bi;
    }
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(static_cast<long>(rows.size()));
    for (const auto& [cell, z] : target.coef) b(rowidx.at(cell)) = z.to_cplx() / fn;
    // scale rows by w(cell) sqrt(h) so the residual is measured in the space norm
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double s = wcell(rows[r]) * sqh;
        b(static_cast<long>(r)) *= s;
        for (auto& Bi : B) Bi.row(static_cast<long>(r)) *= s;
    }

    std::vector<double> gammas(steps.size(), 1.0);
    SumNormSolution sol = min_sum_norms(B, gammas, b, opts);

    CombBlowupResult out;
    out.cost = sol.cost;
    out.dual_bound = sol.dual_bound;
    out.gap = sol.gap;
    out.feas_residual = sol.feas_residual;
    out.converged = sol.converged;
    out.eps = to_double(p.eps);
    out.pass = sol.converged && sol.cost <= out.eps + 1e-3;
    for (std::size_t si = 0; si < steps.size(); ++si) {
        CombWitness w;
        w.time = Rat(steps[si]) * p.h;
        for (std::size_t ci = 0; ci < support[si].size(); ++ci) {
            cplx coef = sol.z[si](static_cast<long>(ci)) / (wcell(support[si][ci]) * sqh);
            if (std::abs(coef) > 1e-14) w.coef.emplace_back(support[si][ci], coef);
        }
        out.witnesses.push_back(std::move(w));
    }
    return out;
}

}  // namespace opext::semi
