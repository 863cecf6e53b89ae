#pragma once

#include <cmath>

namespace isingmis::detail {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(z)) without overflow.
inline double log1p_exp(double z) {
    if (z > 36.0) return z;
    if (z < -36.0) return std::exp(z);
    return std::log1p(std::exp(z));
}

// log(sigmoid(z)) = -log(1 + exp(-z)).
inline double log_sigmoid(double z) { return -log1p_exp(-z); }

inline double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

}  // namespace isingmis::detail
