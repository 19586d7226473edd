#pragma once

// Grid functions on {0, 1, ..., N} with homogeneous Dirichlet boundary
// values, the forward and second differences, and the four norms used to
// measure them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dirichlet {

/// Element of E_N: N+1 samples x(0..N) with x(0) = x(N) = 0.
///
/// Node k represents the point t = k/N. Both boundary zeros are stored so
/// that stencils at k = 1 and k = N-1 need no special casing. Interior
/// values live at indices 1..N-1 of values().
class GridFunction {
public:
    /// The zero element of E_N.
    static GridFunction zeros(std::size_t n) {
        check_subdivisions(n);
        return GridFunction(n, std::vector<double>(n + 1, 0.0));
    }

    /// Wraps a full sample vector (length N+1). Throws if the boundary
    /// values are not exactly zero or any entry is non-finite.
    static GridFunction from_values(std::vector<double> values) {
        if (values.size() < 3) {
            throw std::invalid_argument("grid function needs at least 3 nodes (N >= 2)");
        }
        if (values.front() != 0.0 || values.back() != 0.0) {
            throw std::invalid_argument("grid function must vanish at k = 0 and k = N");
        }
        for (double v : values) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("grid function entries must be finite");
            }
        }
        const std::size_t n = values.size() - 1;
        return GridFunction(n, std::move(values));
    }

    /// Builds an element from its N-1 interior values.
    static GridFunction from_interior(std::span<const double> interior) {
        std::vector<double> values(interior.size() + 2, 0.0);
        std::copy(interior.begin(), interior.end(), values.begin() + 1);
        return from_values(std::move(values));
    }

    /// Samples g(k/N) at interior nodes; the boundary is forced to zero.
    template <typename Fn>
    static GridFunction sample(std::size_t n, Fn&& g) {
        check_subdivisions(n);
        std::vector<double> values(n + 1, 0.0);
        for (std::size_t k = 1; k < n; ++k) {
            values[k] = g(static_cast<double>(k) / static_cast<double>(n));
        }
        return from_values(std::move(values));
    }

    std::size_t subdivisions() const noexcept { return n_; }
    std::size_t interior_size() const noexcept { return n_ - 1; }

    double operator[](std::size_t k) const { return values_[k]; }
    double t(std::size_t k) const noexcept {
        return static_cast<double>(k) / static_cast<double>(n_);
    }

    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> interior() const noexcept {
        return std::span<const double>(values_).subspan(1, n_ - 1);
    }

    /// Returns x + scale * direction, where direction holds interior values.
    GridFunction axpy(double scale, std::span<const double> direction) const {
        if (direction.size() != n_ - 1) {
            throw std::invalid_argument("axpy: direction must have N-1 interior entries");
        }
        std::vector<double> values = values_;
        for (std::size_t k = 1; k < n_; ++k) {
            values[k] += scale * direction[k - 1];
        }
        return from_values(std::move(values));
    }

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    GridFunction(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {}

    static void check_subdivisions(std::size_t n) {
        if (n < 2) {
            throw std::invalid_argument("subdivision count N must be >= 2, got " + std::to_string(n));
        }
    }

    std::size_t n_;
    std::vector<double> values_;
};

/// Entry k-1 holds x(k) - x(k-1), k = 1..N.
inline std::vector<double> forward_difference(const GridFunction& x) {
    const std::size_t n = x.subdivisions();
    std::vector<double> out(n);
    for (std::size_t k = 1; k <= n; ++k) {
        out[k - 1] = x[k] - x[k - 1];
    }
    return out;
}

/// Entry k-1 holds x(k+1) - 2x(k) + x(k-1), k = 1..N-1.
inline std::vector<double> second_difference(const GridFunction& x) {
    const std::size_t n = x.subdivisions();
    std::vector<double> out(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
        out[k - 1] = x[k + 1] - 2.0 * x[k] + x[k - 1];
    }
    return out;
}

struct Norms {
    double n_norm = 0.0;      ///< (sum_{i=1}^{N-1} |x(i)|^2)^{1/2}
    double delta_norm = 0.0;  ///< (sum_{i=1}^{N} |dx(i-1)|^2)^{1/2}
    double e_norm = 0.0;      ///< (sum_{i=1}^{N-1} |d2x(i-1)|^2)^{1/2}
    double sup_norm = 0.0;    ///< max_k |x(k)|
};

inline double euclidean_norm(std::span<const double> v) {
    double sum = 0.0;
    for (double a : v) {
        sum += a * a;
    }
    return std::sqrt(sum);
}

inline double sup_abs(std::span<const double> v) {
    double m = 0.0;
    for (double a : v) {
        m = std::max(m, std::abs(a));
    }
    return m;
}

inline Norms norms(const GridFunction& x) {
    Norms out;
    out.n_norm = euclidean_norm(x.interior());
    out.delta_norm = euclidean_norm(forward_difference(x));
    out.e_norm = euclidean_norm(second_difference(x));
    out.sup_norm = sup_abs(x.values());
    return out;
}

/// Sup-norm distance between two elements of the same E_N.
inline double sup_distance(const GridFunction& a, const GridFunction& b) {
    if (a.subdivisions() != b.subdivisions()) {
        throw std::invalid_argument("sup_distance: grids differ in N");
    }
    double m = 0.0;
    for (std::size_t k = 0; k <= a.subdivisions(); ++k) {
        m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
}

/// Absolute defect of the summation-by-parts identity
///
///   sum_{k=1}^{m} a_k db_k = a_{m+1} b_{m+1} - a_1 b_1 - sum_{k=1}^{m} da_k b_{k+1}
///
/// with d the forward difference. Sequence element a_k is stored at a[k-1],
/// so both spans must hold exactly m+1 entries.
inline double summation_by_parts_residual(std::span<const double> a, std::span<const double> b,
                                          std::size_t m) {
    if (a.size() != m + 1 || b.size() != m + 1) {
        throw std::invalid_argument("summation_by_parts_residual: sequences must have m+1 entries");
    }
    double lhs = 0.0;
    double tail = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        lhs += a[i] * (b[i + 1] - b[i]);
        tail += (a[i + 1] - a[i]) * b[i + 1];
    }
    const double rhs = a[m] * b[m] - a[0] * b[0] - tail;
    return std::abs(lhs - rhs);
}

}  // namespace dirichlet
