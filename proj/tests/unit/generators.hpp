#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

// Seeded input generators for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi);
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    template <class T>
    T pick(std::initializer_list<T> items) {
        auto it = items.begin();
        std::advance(it, integer(0, static_cast<int>(items.size()) - 1));
        return *it;
    }

    /// Strictly increasing points in (lo, hi).
    std::vector<double> sorted(int n, double lo, double hi);

private:
    std::mt19937_64 rng_;
};

inline double Gen::log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

inline std::vector<double> Gen::sorted(int n, double lo, double hi) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(uniform(lo, hi));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

constexpr int kCases = 200;
