#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace litkg::vec {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// In-place L2 normalization; zero vectors stay zero and return false.
inline bool l2_normalize(std::vector<double>& v) {
    double n = norm(v);
    if (n == 0.0) return false;
    for (double& x : v) x /= n;
    return true;
}

/// Cosine similarity; 0 by convention when either vector has zero norm.
inline double cosine(std::span<const double> a, std::span<const double> b) {
    double na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

inline double cosine_distance(std::span<const double> a, std::span<const double> b) {
    return 1.0 - cosine(a, b);
}

/// Pairwise (tree) summation. Reported means use this so results do not
/// depend on how the inputs were chunked across workers.
inline double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    size_t mid = xs.size() / 2;
    return pairwise_sum(xs.subspan(0, mid)) + pairwise_sum(xs.subspan(mid));
}

inline double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return pairwise_sum(xs) / static_cast<double>(xs.size());
}

} // namespace litkg::vec
