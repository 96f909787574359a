#ifndef PRZK_RNG_HPP
#define PRZK_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace przk {

// Seeded, reproducible random source. Not a CSPRNG: every value it produces is
// a function of the seed words, which is what campaigns and tests need.
//
// std::mt19937_64 and std::seed_seq are fully specified by the standard, and
// the helpers below avoid the implementation-defined std::*_distribution
// types, so a given seed yields the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    Rng(std::initializer_list<std::uint64_t> seed_words);

    std::uint64_t next() { return engine_(); }
    void fill(std::span<std::uint8_t> out);

    // Uniform in [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound);

    // Uniform in [low, high]; returns exactly `low` when low == high.
    double uniform(double low, double high);

private:
    std::mt19937_64 engine_;
};

} // namespace przk

#endif
