#pragma once

// Subspaces of R^d with orthonormal bases, principal angles and the metric
// d(V,W) = sin angle(V,W) on the Grassmannian G(s,d).
//
// The maximal principal angle is computed from the singular values of
// V_B' * W_B (arccos of the smallest one). Near zero the arccos route loses
// half the digits, so max_angle switches to the sine-based form
// sigma_max((I - V V') W_B) there; both agree to machine precision on the
// crossover.

#include <cmath>
#include <vector>

#include "angular/linalg.hpp"

namespace angular {

class Subspace {
public:
    // Takes a matrix whose columns are already orthonormal; use
    // orthonormalize() for raw bases.
    explicit Subspace(Mat orthonormal_basis) : basis_(std::move(orthonormal_basis)) {
        if (basis_.cols() < 1 || basis_.cols() > basis_.rows())
            throw DimensionMismatch("Subspace: need 1 <= s <= d");
    }

    int dim_ambient() const { return basis_.rows(); }
    int dim_sub() const { return basis_.cols(); }
    const Mat& basis() const { return basis_; }

    static Subspace span_of(const Vec& v) {
        double n = norm2(v);
        if (n == 0.0) throw RankDeficient("span_of: zero vector");
        Mat b(static_cast<int>(v.size()), 1);
        for (size_t i = 0; i < v.size(); ++i) b(static_cast<int>(i), 0) = v[i] / n;
        return Subspace(std::move(b));
    }

    // Max-entry norm of basis'basis - I.
    double orthonormality_defect() const {
        Mat g = basis_.transposed() * basis_;
        double m = 0.0;
        for (int i = 0; i < g.rows(); ++i)
            for (int j = 0; j < g.cols(); ++j) m = std::max(m, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
        return m;
    }

private:
    Mat basis_;
};

struct PrincipalAngles {
    // Nondecreasing, each in [0, pi/2]; the maximal angle is last.
    std::vector<double> angles;
    double max() const { return angles.back(); }
};

// Orthonormalize a raw basis of full column rank (relative rank tolerance
// 1e-10, the double-precision SVD noise floor for the dimensions used here).
inline Subspace orthonormalize(const Mat& raw_basis) {
    if (raw_basis.cols() < 1 || raw_basis.cols() > raw_basis.rows())
        throw DimensionMismatch("orthonormalize: need 1 <= s <= d");
    SVDResult s = svd(raw_basis);
    if (s.sigma.back() <= 1e-10 * s.sigma.front() || s.sigma.front() == 0.0)
        throw RankDeficient("orthonormalize: numerically rank deficient basis");
    QRResult qr = qr_thin(raw_basis);
    return Subspace(std::move(qr.q));
}

namespace detail {
inline void check_same_grassmannian(const Subspace& v, const Subspace& w) {
    if (v.dim_ambient() != w.dim_ambient() || v.dim_sub() != w.dim_sub())
        throw DimensionMismatch("subspaces live on different Grassmannians");
}
}  // namespace detail

inline PrincipalAngles principal_angles(const Subspace& v, const Subspace& w) {
    detail::check_same_grassmannian(v, w);
    Mat m = v.basis().transposed() * w.basis();
    SVDResult s = svd(m);
    PrincipalAngles pa;
    pa.angles.resize(s.sigma.size());
    // sigma descending -> angles nondecreasing.
    for (size_t i = 0; i < s.sigma.size(); ++i)
        pa.angles[i] = std::acos(std::clamp(s.sigma[i], 0.0, 1.0));
    return pa;
}

// Maximal principal angle in [0, pi/2].
inline double max_angle(const Subspace& v, const Subspace& w) {
    detail::check_same_grassmannian(v, w);
    Mat m = v.basis().transposed() * w.basis();
    SVDResult s = svd(m);
    double cosphi = std::clamp(s.sigma.back(), 0.0, 1.0);
    if (cosphi < 0.999) return std::acos(cosphi);
    // Small angle: use sin phi = sigma_max(W_B - V (V' W_B)).
    Mat resid = w.basis() - v.basis() * m;
    double sinphi = std::clamp(spectral_norm(resid), 0.0, 1.0);
    return std::asin(sinphi);
}

inline double max_angle(const Vec& v, const Vec& w) { return vector_angle(v, w); }

// Metric on G(s,d): d(V,W) = sin angle(V,W), values in [0,1].
inline double grassmann_distance(const Subspace& v, const Subspace& w) {
    return std::sin(max_angle(v, w));
}

// Orthonormal basis of the intersection of two subspaces whose intersection
// has the given dimension. Null vectors of M = [B1 | -B2] yield coefficients
// a with B1 a = B2 c; they are read off the smallest eigendirections of the
// Gram matrix M'M, which exist even when M is wide.
inline Subspace intersect_subspaces(const Subspace& s1, const Subspace& s2, int dim) {
    if (s1.dim_ambient() != s2.dim_ambient()) throw DimensionMismatch("intersect: ambient dims differ");
    int d = s1.dim_ambient(), p = s1.dim_sub(), q = s2.dim_sub();
    if (dim < 1 || dim > std::min(p, q)) throw DimensionMismatch("intersect: bad target dimension");
    Mat stacked(d, p + q);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < p; ++j) stacked(i, j) = s1.basis()(i, j);
        for (int j = 0; j < q; ++j) stacked(i, p + j) = -s2.basis()(i, j);
    }
    Mat gram = stacked.transposed() * stacked;
    SVDResult s = svd(gram);
    Mat result(d, dim);
    for (int k = 0; k < dim; ++k) {
        int col = p + q - 1 - k;
        Vec x(d, 0.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < p; ++j) x[i] += s1.basis()(i, j) * s.v(j, col);
        for (int i = 0; i < d; ++i) result(i, k) = x[i];
    }
    return orthonormalize(result);
}

}  // namespace angular
