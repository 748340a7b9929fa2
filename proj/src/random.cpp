#include "dgstab/random.hpp"

#include <cmath>

namespace dgstab {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SeedStream::SeedStream(std::uint64_t seed) noexcept : key_(splitmix64(seed)) {}

SeedStream SeedStream::child(std::uint64_t index) const noexcept {
    return SeedStream(FromKey{}, splitmix64(key_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

Rng SeedStream::engine() const { return Rng(key_); }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double log_uniform(Rng& rng, double lo, double hi) { return std::exp(uniform(rng, std::log(lo), std::log(hi))); }

double random_sign(Rng& rng) { return (rng() >> 63) ? -1.0 : 1.0; }

Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal;
    Matrix M(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = normal(rng);
    }
    return M;
}

}  // namespace dgstab
