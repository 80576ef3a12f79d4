#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace gala {

/// Named, independent random streams derived from one experiment seed.
enum class Stream : std::uint32_t { class_means = 1, train_samples = 2, test_samples = 3, init = 4, shuffle = 5 };

/// Seeded generator with platform-independent transforms. The standard
/// distributions are implementation-defined, so uniform/normal/shuffle are
/// spelled out here to keep outputs identical across standard libraries.
class Rng {
public:
    Rng(std::uint64_t seed, Stream stream);

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal (Box-Muller).
    double normal();
    /// Uniform integer in [0, n), unbiased.
    std::uint64_t below(std::uint64_t n);

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace gala
