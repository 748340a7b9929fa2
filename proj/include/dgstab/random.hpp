#pragma once

#include <cstdint>
#include <random>

#include "dgstab/linalg.hpp"

namespace dgstab {

using Rng = std::mt19937_64;

/// Deterministic, splittable source of seeds. A stream is identified by a
/// 64-bit key; child(i) derives an independent stream for sub-task i, so
/// parallel workers draw the same numbers regardless of scheduling.
class SeedStream {
public:
    explicit SeedStream(std::uint64_t seed) noexcept;

    [[nodiscard]] SeedStream child(std::uint64_t index) const noexcept;
    [[nodiscard]] Rng engine() const;
    [[nodiscard]] std::uint64_t key() const noexcept { return key_; }

private:
    struct FromKey {};
    SeedStream(FromKey, std::uint64_t key) noexcept : key_(key) {}
    std::uint64_t key_;
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

[[nodiscard]] double uniform(Rng& rng, double lo, double hi);
/// exp(uniform(log lo, log hi)).
[[nodiscard]] double log_uniform(Rng& rng, double lo, double hi);
[[nodiscard]] double random_sign(Rng& rng);
[[nodiscard]] Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

}  // namespace dgstab
