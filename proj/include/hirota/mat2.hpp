#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace hirota {

using cx = std::complex<double>;
inline constexpr cx I{0.0, 1.0};
inline constexpr double PI = 3.14159265358979323846;

// 2x2 complex matrix, row-major. Value type, no hidden state.
struct Mat2 {
    cx a11{}, a12{}, a21{}, a22{};

    static Mat2 id() { return {1.0, 0.0, 0.0, 1.0}; }

    friend Mat2 operator+(const Mat2& x, const Mat2& y) {
        return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
    }
    friend Mat2 operator-(const Mat2& x, const Mat2& y) {
        return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
    }
    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
                x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
    }
    friend Mat2 operator*(cx s, const Mat2& x) {
        return {s * x.a11, s * x.a12, s * x.a21, s * x.a22};
    }

    cx det() const { return a11 * a22 - a12 * a21; }

    Mat2 inv() const {
        const cx d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    double norm_max() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)),
                        std::max(std::abs(a21), std::abs(a22)));
    }
};

inline Mat2 conj(const Mat2& m) {
    return {std::conj(m.a11), std::conj(m.a12), std::conj(m.a21), std::conj(m.a22)};
}

// sigma2 A sigma2 (the symmetry conjugation used throughout).
inline Mat2 sigma2_sandwich(const Mat2& m) {
    return {m.a22, -m.a21, -m.a12, m.a11};
}

// exp(B) for traceless 2x2 B, via B^2 = -det(B) I.
inline Mat2 exp_traceless(const Mat2& b) {
    const cx musq = -b.det();
    const cx mu = std::sqrt(musq);
    cx c, s;  // cosh(mu), sinh(mu)/mu
    if (std::abs(mu) < 1e-8) {
        c = 1.0 + musq / 2.0 + musq * musq / 24.0;
        s = 1.0 + musq / 6.0 + musq * musq / 120.0;
    } else {
        c = std::cosh(mu);
        s = std::sinh(mu) / mu;
    }
    return {c + s * b.a11, s * b.a12, s * b.a21, c + s * b.a22};
}

}  // namespace hirota
