// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "opext/operator.hpp"

namespace opext {

struct ResolventResult {
    SeqVector u;              // ||(lambda - op) u - v|| <= residual bound
    CertifiedValue residual;  // certified residual bound
};

/// Applies R(lambda, op) = (lambda - op)^{-1} to a finitely supported vector:
/// direct solve for Dense, Neumann series with a geometric tail bound for
/// shifts (outside the certified annulus), per-entry division for diagonals.
ResolventResult apply_resolvent(const Operator& op, cplx lambda, const SeqVector& v, double tol);

/// A finite family lambda -> R(lambda) of same-shape dense operators.
struct PseudoResolventFamily {
    std::vector<cplx> lambdas;
    std::vector<Eigen::MatrixXcd> ops;
};

struct PseudoResolventReport {
    double max_residual = 0.0;  // max over sampled pairs of ||R(l)-R(m)-(m-l)R(l)R(m)||
    bool kernel_trivial = true;
    double kernel_sigma_min = 0.0;  // smallest singular value used for the rank check
};

/// Checks the resolvent identity over sampled index pairs and reports whether
/// ker R(lambda) is trivial (rank check on the first member).
PseudoResolventReport check_pseudo_resolvent(const PseudoResolventFamily& fam,
                                             const std::vector<std::pair<int, int>>& sample_pairs);

}  // namespace opext
