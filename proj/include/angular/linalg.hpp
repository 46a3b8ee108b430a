#pragma once

// Small dense linear algebra: the systems in this library live in R^d with
// d <= 6, so everything here is written for tiny matrices and favors
// robustness over blocking/performance tricks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "angular/errors.hpp"

namespace angular {

using Vec = std::vector<double>;

class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols), 0.0) {}
    Mat(int rows, int cols, std::initializer_list<double> vals) : Mat(rows, cols) {
        size_t i = 0;
        for (double v : vals) {
            if (i >= a_.size()) break;
            a_[i++] = v;
        }
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    Vec col(int j) const {
        Vec c(rows_);
        for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }
    void set_col(int j, const Vec& c) {
        for (int i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }

    Mat transposed() const {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

inline Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dimensions differ");
    Mat c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline Mat operator+(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("mat add: shapes differ");
    Mat c = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
    return c;
}

inline Mat operator-(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("mat sub: shapes differ");
    Mat c = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
    return c;
}

inline Mat operator*(double s, const Mat& a) {
    Mat c = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) *= s;
    return c;
}

inline Vec operator*(const Mat& a, const Vec& x) {
    if (a.cols() != static_cast<int>(x.size())) throw DimensionMismatch("matvec: sizes differ");
    Vec y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec scaled(const Vec& x, double s) {
    Vec y = x;
    for (double& v : y) v *= s;
    return y;
}

inline Vec axpy(double a, const Vec& x, const Vec& y) {
    Vec z = y;
    for (size_t i = 0; i < x.size(); ++i) z[i] += a * x[i];
    return z;
}

// Angle in [0, pi/2] between the lines spanned by two nonzero vectors.
inline double vector_angle(const Vec& v, const Vec& w) {
    double nv = norm2(v), nw = norm2(w);
    if (nv == 0.0 || nw == 0.0) throw DimensionMismatch("vector_angle: zero vector");
    double c = std::abs(dot(v, w)) / (nv * nw);
    return std::acos(std::clamp(c, 0.0, 1.0));
}

struct QRResult {
    Mat q;  // m x n, orthonormal columns
    Mat r;  // n x n, upper triangular with nonnegative diagonal
};

// Thin Householder QR for m >= n; the diagonal of R is normalized to be >= 0
// so that repeated factorizations keep a stable column orientation.
inline QRResult qr_thin(Mat a) {
    int m = a.rows(), n = a.cols();
    if (m < n) throw DimensionMismatch("qr_thin: more columns than rows");
    std::vector<Vec> vs;
    vs.reserve(n);
    for (int k = 0; k < n; ++k) {
        Vec v(m, 0.0);
        double alpha = 0.0;
        for (int i = k; i < m; ++i) alpha += a(i, k) * a(i, k);
        alpha = std::sqrt(alpha);
        if (a(k, k) > 0) alpha = -alpha;
        for (int i = k; i < m; ++i) v[i] = a(i, k);
        v[k] -= alpha;
        double vn = norm2(v);
        if (vn > 0) {
            for (double& x : v) x /= vn;
            for (int j = k; j < n; ++j) {
                double s = 0.0;
                for (int i = k; i < m; ++i) s += v[i] * a(i, j);
                s *= 2.0;
                for (int i = k; i < m; ++i) a(i, j) -= s * v[i];
            }
        }
        vs.push_back(std::move(v));
    }
    Mat r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) r(i, j) = a(i, j);
    // Accumulate Q by applying the reflectors to the first n identity columns.
    Mat q(m, n);
    for (int j = 0; j < n; ++j) q(j, j) = 1.0;
    for (int k = n - 1; k >= 0; --k) {
        const Vec& v = vs[k];
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = k; i < m; ++i) s += v[i] * q(i, j);
            s *= 2.0;
            for (int i = k; i < m; ++i) q(i, j) -= s * v[i];
        }
    }
    for (int k = 0; k < n; ++k) {
        if (r(k, k) < 0) {
            for (int j = k; j < n; ++j) r(k, j) = -r(k, j);
            for (int i = 0; i < m; ++i) q(i, k) = -q(i, k);
        }
    }
    return {std::move(q), std::move(r)};
}

struct SVDResult {
    Mat u;       // m x n
    Vec sigma;   // n, descending, >= 0
    Mat v;       // n x n
};

namespace detail {

// One-sided Jacobi SVD for m >= n. Plenty accurate for the tiny matrices
// used here; sorts singular values in descending order.
inline SVDResult jacobi_svd_tall(const Mat& a0) {
    int m = a0.rows(), n = a0.cols();
    Mat a = a0;
    Mat v = Mat::identity(n);
    const double eps = 1e-15;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double app = 0, aqq = 0, apq = 0;
                for (int i = 0; i < m; ++i) {
                    app += a(i, p) * a(i, p);
                    aqq += a(i, q) * a(i, q);
                    apq += a(i, p) * a(i, q);
                }
                if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                double tau = (aqq - app) / (2.0 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (int i = 0; i < m; ++i) {
                    double x = a(i, p), y = a(i, q);
                    a(i, p) = c * x - s * y;
                    a(i, q) = s * x + c * y;
                }
                for (int i = 0; i < n; ++i) {
                    double x = v(i, p), y = v(i, q);
                    v(i, p) = c * x - s * y;
                    v(i, q) = s * x + c * y;
                }
            }
        }
        if (!rotated) break;
    }
    Vec sigma(n);
    for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int i = 0; i < m; ++i) s += a(i, j) * a(i, j);
        sigma[j] = std::sqrt(s);
    }
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return sigma[i] > sigma[j]; });
    Mat u(m, n), vs(n, n);
    Vec so(n);
    for (int k = 0; k < n; ++k) {
        int j = idx[k];
        so[k] = sigma[j];
        for (int i = 0; i < n; ++i) vs(i, k) = v(i, j);
        if (sigma[j] > 0) {
            for (int i = 0; i < m; ++i) u(i, k) = a(i, j) / sigma[j];
        }
    }
    // Complete U columns for (numerically) zero singular values.
    double smax = so.empty() ? 0.0 : so[0];
    for (int k = 0; k < n; ++k) {
        if (so[k] > 1e-14 * std::max(1.0, smax)) continue;
        for (int cand = 0; cand < m; ++cand) {
            Vec e(m, 0.0);
            e[cand] = 1.0;
            for (int j = 0; j < n; ++j) {
                if (j == k && so[j] <= 1e-14 * std::max(1.0, smax) && j > k) continue;
                double s = 0;
                for (int i = 0; i < m; ++i) s += u(i, j) * e[i];
                for (int i = 0; i < m; ++i) e[i] -= s * u(i, j);
            }
            double nn = norm2(e);
            if (nn > 1e-6) {
                for (int i = 0; i < m; ++i) u(i, k) = e[i] / nn;
                break;
            }
        }
    }
    return {std::move(u), std::move(so), std::move(vs)};
}

}  // namespace detail

// SVD of an arbitrary small dense matrix. For wide matrices the transposed
// problem is factored and the roles of U and V are swapped; in that case U is
// m x m and V is n x m.
inline SVDResult svd(const Mat& a) {
    if (a.rows() >= a.cols()) return detail::jacobi_svd_tall(a);
    SVDResult t = detail::jacobi_svd_tall(a.transposed());
    return {std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

inline double spectral_norm(const Mat& a) {
    SVDResult s = svd(a);
    return s.sigma.empty() ? 0.0 : s.sigma[0];
}

inline double condition_number(const Mat& a) {
    SVDResult s = svd(a);
    double lo = s.sigma.back();
    if (lo <= 0.0) throw SingularMatrix("condition_number: singular matrix");
    return s.sigma[0] / lo;
}

// Solve a.x = b via LU with partial pivoting (square, tiny).
inline Vec solve(Mat a, Vec b) {
    int n = a.rows();
    if (a.cols() != n || static_cast<int>(b.size()) != n) throw DimensionMismatch("solve: bad shapes");
    std::vector<int> piv(n);
    std::iota(piv.begin(), piv.end(), 0);
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (a(p, k) == 0.0) throw SingularMatrix("solve: singular matrix");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
            std::swap(b[p], b[k]);
        }
        for (int i = k + 1; i < n; ++i) {
            double f = a(i, k) / a(k, k);
            a(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    Vec x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

inline Mat inverse(const Mat& a) {
    int n = a.rows();
    Mat inv(n, n);
    for (int j = 0; j < n; ++j) {
        Vec e(n, 0.0);
        e[j] = 1.0;
        inv.set_col(j, solve(a, e));
    }
    return inv;
}

inline double determinant(Mat a) {
    int n = a.rows();
    double d = 1.0;
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (a(p, k) == 0.0) return 0.0;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
            d = -d;
        }
        d *= a(k, k);
        for (int i = k + 1; i < n; ++i) {
            double f = a(i, k) / a(k, k);
            for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return d;
}

// Eigenvalues of a real 3x3 matrix via the characteristic cubic.
inline std::vector<std::complex<double>> eigenvalues3(const Mat& a) {
    if (a.rows() != 3 || a.cols() != 3) throw DimensionMismatch("eigenvalues3: need 3x3");
    double tr = a(0, 0) + a(1, 1) + a(2, 2);
    double m2 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0) +
                a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    double det = determinant(a);
    // x^3 - tr x^2 + m2 x - det = 0; depress with x = y + tr/3 to y^3 + p y + q = 0.
    double p = m2 - tr * tr / 3.0;
    double q = -2.0 * tr * tr * tr / 27.0 + tr * m2 / 3.0 - det;
    std::vector<std::complex<double>> roots;
    double disc = q * q / 4.0 + p * p * p / 27.0;
    double shift = tr / 3.0;
    if (disc > 0) {
        double sq = std::sqrt(disc);
        double u = std::cbrt(-q / 2.0 + sq);
        double v = std::cbrt(-q / 2.0 - sq);
        double y1 = u + v;
        double re = -y1 / 2.0;
        double im = std::sqrt(3.0) / 2.0 * std::abs(u - v);
        roots = {{y1 + shift, 0.0}, {re + shift, im}, {re + shift, -im}};
    } else {
        double r = std::sqrt(-p * p * p / 27.0);
        double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
        double mag = 2.0 * std::cbrt(r);
        for (int k = 0; k < 3; ++k)
            roots.push_back({mag * std::cos((phi + 2.0 * M_PI * k) / 3.0) + shift, 0.0});
    }
    return roots;
}

// Ratio sigma_min/sigma_max without forming a full SVD (used by the lazy
// invertibility check on every generated matrix).
inline double smallest_singular_ratio(const Mat& a) {
    SVDResult s = svd(a);
    if (s.sigma[0] == 0.0) return 0.0;
    return s.sigma.back() / s.sigma[0];
}

}  // namespace angular
