// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <vector>

#include "opext/rational.hpp"

namespace opext {

/// Spectrum description: finitely many points, a union of circles, or a
/// union of annuli (0 <= inner <= outer).
struct SpectrumDesc {
    enum class Kind { FinitePoints, CircleUnion, Annulus, AnnulusUnion };
    Kind kind = Kind::FinitePoints;

    std::vector<cplx> points;                       // FinitePoints
    std::vector<double> radii;                      // CircleUnion
    std::vector<std::pair<double, double>> annuli;  // Annulus (1 entry) / AnnulusUnion

    static SpectrumDesc finite_points(std::vector<cplx> pts) {
        SpectrumDesc s;
        s.kind = Kind::FinitePoints;
        s.points = std::move(pts);
        return s;
    }
    static SpectrumDesc circle_union(std::vector<double> r) {
        SpectrumDesc s;
        s.kind = Kind::CircleUnion;
        s.radii = std::move(r);
        return s;
    }
    static SpectrumDesc annulus(double inner, double outer) {
        if (!(0 <= inner && inner <= outer)) throw std::invalid_argument("annulus: need 0 <= inner <= outer");
        SpectrumDesc s;
        s.kind = Kind::Annulus;
        s.annuli = {{inner, outer}};
        return s;
    }

    double inner() const { return annuli.at(0).first; }
    double outer() const { return annuli.at(0).second; }
};

}  // namespace opext
