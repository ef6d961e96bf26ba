#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hirota/errors.hpp"

namespace hirota {

// Uniform grid x_i = x0 + i h, i = 0..n-1.
struct UniformGrid {
    double x0 = 0.0;
    double h = 1.0;
    std::size_t n = 0;

    double operator[](std::size_t i) const { return x0 + static_cast<double>(i) * h; }
    double back() const { return (*this)[n - 1]; }

    std::vector<double> to_vector() const {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = (*this)[i];
        return v;
    }

    static UniformGrid over(double a, double b, std::size_t n) {
        if (n < 2 || !(b > a)) throw InputError("UniformGrid: need n >= 2 and b > a");
        return {a, (b - a) / static_cast<double>(n - 1), n};
    }
};

}  // namespace hirota
