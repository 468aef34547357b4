// polynomial_roots.hpp
// All complex roots of a real polynomial (companion-matrix eigenvalues).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include "../error.hpp"

namespace rydchain::detail {

struct PolynomialRoots {
    std::vector<std::complex<double>> roots;
    double max_residual = 0.0;  // max |p(root)| / (sum |c_i| |root|^i)
};

// coeffs[i] multiplies x^i; the leading coefficient must be non-zero.
inline PolynomialRoots polynomial_roots(std::span<const double> coeffs) {
    using C = std::complex<double>;
    if (coeffs.size() < 2 || coeffs.back() == 0.0)
        throw Error(ErrorKind::Validation, "polynomial needs degree >= 1 and a non-zero leading coefficient");
    const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));

    PolynomialRoots out;
    if (coeffs.size() == 2) {
        out.roots.emplace_back(-c(0) / c(1), 0.0);
    } else {
        Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(c);
        const auto& r = solver.roots();
        out.roots.assign(r.data(), r.data() + r.size());
    }

    // one Newton polish per root, then the relative residual
    for (C& x : out.roots) {
        for (int pass = 0; pass < 2; ++pass) {
            C p = coeffs.back(), dp = 0.0;
            for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
                dp = dp * x + p;
                p = p * x + coeffs[i];
            }
            if (pass == 0 && dp != C(0.0)) x -= p / dp;
            if (pass == 1) {
                double scale = 0.0, xa = 1.0;
                for (double ci : coeffs) {
                    scale += std::abs(ci) * xa;
                    xa *= std::abs(x);
                }
                out.max_residual = std::max(out.max_residual, std::abs(p) / scale);
            }
        }
    }
    if (out.max_residual > 1e-12)
        throw Error(ErrorKind::Numerical, "root finder did not converge, residual " + std::to_string(out.max_residual));
    return out;
}

} // namespace rydchain::detail
