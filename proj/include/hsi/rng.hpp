#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace hsi {

// Seeded random stream. mt19937_64 output is bit-exact per the standard;
// the distribution transforms live here because the std:: distributions are
// implementation-defined and would break cross-toolchain reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform on [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // uniform on [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer on [0, n)
    std::uint64_t below(std::uint64_t n) {
        // rejection-free modulo is biased for huge n; n here is pixel/band scale
        return gen_() % n;
    }

    // standard normal via Box-Muller (sine branch discarded, stream stays simple)
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

    // Dirichlet(alpha=1) draw = normalized unit exponentials
    std::vector<double> dirichlet_flat(std::size_t p) {
        std::vector<double> a(p);
        double sum = 0.0;
        for (auto& v : a) {
            double u = uniform();
            while (u <= 0.0) u = uniform();
            v = -std::log(u);
            sum += v;
        }
        for (auto& v : a) v /= sum;
        return a;
    }

    // Fisher-Yates shuffle, deterministic per seed
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

} // namespace hsi
