#pragma once

// The discrete operator
//
//   (D_N x)(k) = d2x(k-1) - f(k/N, x(k)) / N^2,   k = 1..N-1,
//
// its tridiagonal derivative, a Thomas solve for the linearization and the
// quadratic functional whose unique minimizer is that linearized solution.
//
// Vectors of length N-1 ("interior vectors") hold node k at index k-1.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirichlet/grid.hpp"
#include "dirichlet/problem.hpp"

namespace dirichlet {

/// Raised when elimination meets a pivot below the singularity threshold.
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(std::size_t row, double pivot)
        : std::runtime_error("near-zero pivot " + detail::format_number(pivot) + " at row " +
                             std::to_string(row)),
          row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// m x m tridiagonal matrix; row i is sub[i-1], diag[i], sup[i].
struct Tridiagonal {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> sup;

    std::size_t size() const noexcept { return diag.size(); }

    void validate() const {
        const std::size_t m = diag.size();
        if (m == 0 || sub.size() + 1 != m || sup.size() + 1 != m) {
            throw std::invalid_argument("tridiagonal: inconsistent band lengths");
        }
        for (const auto* band : {&sub, &diag, &sup}) {
            for (double v : *band) {
                if (!std::isfinite(v)) {
                    throw std::invalid_argument("tridiagonal: non-finite entry");
                }
            }
        }
    }

    std::vector<double> multiply(std::span<const double> h) const {
        const std::size_t m = size();
        if (h.size() != m) {
            throw std::invalid_argument("tridiagonal multiply: dimension mismatch");
        }
        std::vector<double> out(m);
        for (std::size_t i = 0; i < m; ++i) {
            double s = diag[i] * h[i];
            if (i > 0) s += sub[i - 1] * h[i - 1];
            if (i + 1 < m) s += sup[i] * h[i + 1];
            out[i] = s;
        }
        return out;
    }

    Tridiagonal transposed() const { return Tridiagonal{sup, diag, sub}; }
};

inline constexpr double pivot_threshold = 1e-12;

/// Gaussian elimination without pivoting (Thomas algorithm).
///
/// For the Jacobians assembled below, -J = -d2 + diag(f_x)/N^2. The
/// smallest eigenvalue of -d2 on N-1 interior nodes is
/// 4 sin^2(pi/(2N)) >= 4/N^2, so inf f_x > -1 leaves -J symmetric positive
/// definite with lambda_min >= 3/N^2. Elimination without pivoting is
/// stable for such matrices; a pivot below 1e-12 times its row scale means
/// the lower bound on f_x does not hold at the current iterate.
inline std::vector<double> solve_tridiagonal(const Tridiagonal& m, std::span<const double> rhs) {
    m.validate();
    const std::size_t n = m.size();
    if (rhs.size() != n) {
        throw std::invalid_argument("solve_tridiagonal: rhs length mismatch");
    }
    std::vector<double> c(n, 0.0);  // modified super-diagonal
    std::vector<double> d(n, 0.0);  // modified rhs
    for (std::size_t i = 0; i < n; ++i) {
        const double lower = i > 0 ? m.sub[i - 1] : 0.0;
        const double upper = i + 1 < n ? m.sup[i] : 0.0;
        const double pivot = m.diag[i] - (i > 0 ? lower * c[i - 1] : 0.0);
        const double scale = std::abs(lower) + std::abs(m.diag[i]) + std::abs(upper);
        if (!(std::abs(pivot) > pivot_threshold * scale)) {
            throw SingularMatrixError(i, pivot);
        }
        c[i] = upper / pivot;
        d[i] = (rhs[i] - (i > 0 ? lower * d[i - 1] : 0.0)) / pivot;
    }
    std::vector<double> h(n);
    h[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        h[i] = d[i] - c[i] * h[i + 1];
    }
    return h;
}

/// D_N x as an element of E_N (boundary entries zero).
inline GridFunction apply_dn(const ProblemSpec& spec, const GridFunction& x) {
    const std::size_t n = x.subdivisions();
    const double inv_n2 = 1.0 / static_cast<double>(n * n);
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        out[k] = (x[k + 1] - 2.0 * x[k] + x[k - 1]) - inv_n2 * spec.eval_f(x.t(k), x[k]);
    }
    return GridFunction::from_values(std::move(out));
}

struct Residual {
    std::vector<double> vector;  ///< (D_N x)(k) - v(k/N)/N^2 at index k-1
    double norm = 0.0;           ///< Euclidean norm over interior nodes
};

/// Defect of x in the discrete boundary value problem; zero iff x solves it.
inline Residual residual(const ProblemSpec& spec, const GridFunction& x) {
    const std::size_t n = x.subdivisions();
    const double inv_n2 = 1.0 / static_cast<double>(n * n);
    Residual r;
    r.vector.resize(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
        const double t = x.t(k);
        r.vector[k - 1] = (x[k + 1] - 2.0 * x[k] + x[k - 1]) -
                          inv_n2 * (spec.eval_f(t, x[k]) + spec.eval_v(t));
    }
    r.norm = euclidean_norm(r.vector);
    return r;
}

/// Derivative of D_N at x: unit off-diagonals, diag(k) = -2 - f_x(k/N, x(k))/N^2.
inline Tridiagonal jacobian(const ProblemSpec& spec, const GridFunction& x) {
    const std::size_t n = x.subdivisions();
    const std::size_t m = n - 1;
    const double inv_n2 = 1.0 / static_cast<double>(n * n);
    Tridiagonal j{std::vector<double>(m - 1, 1.0), std::vector<double>(m),
                  std::vector<double>(m - 1, 1.0)};
    for (std::size_t k = 1; k < n; ++k) {
        j.diag[k - 1] = -2.0 - inv_n2 * spec.eval_fx(x.t(k), x[k]);
    }
    return j;
}

/// The unique h in E_N with D_N'(x) h = a.
inline GridFunction linearized_solve(const ProblemSpec& spec, const GridFunction& x,
                                     std::span<const double> a) {
    if (a.size() != x.interior_size()) {
        throw std::invalid_argument("linearized_solve: a must have N-1 entries");
    }
    return GridFunction::from_interior(solve_tridiagonal(jacobian(spec, x), a));
}

/// Phi_N(h) = 1/2 sum_{k=1}^{N} |dh(k-1)|^2
///          + 1/(2N^2) sum_{k=1}^{N-1} f_x(k/N, x(k)) h(k)^2
///          + sum_{k=1}^{N-1} h(k) a(k).
///
/// Its gradient is -(D_N'(x) h) + a, so the minimizer is linearized_solve(x, a).
inline double phi_n(const ProblemSpec& spec, const GridFunction& x, std::span<const double> a,
                    const GridFunction& h) {
    const std::size_t n = x.subdivisions();
    if (h.subdivisions() != n || a.size() != n - 1) {
        throw std::invalid_argument("phi_n: dimension mismatch");
    }
    const double inv_n2 = 1.0 / static_cast<double>(n * n);
    double kinetic = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double dh = h[k] - h[k - 1];
        kinetic += dh * dh;
    }
    double potential = 0.0;
    double linear = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        potential += spec.eval_fx(x.t(k), x[k]) * h[k] * h[k];
        linear += h[k] * a[k - 1];
    }
    return 0.5 * kinetic + 0.5 * inv_n2 * potential + linear;
}

}  // namespace dirichlet
