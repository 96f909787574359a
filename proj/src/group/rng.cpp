#include "przk/rng.hpp"

#include <stdexcept>
#include <vector>

namespace przk {

namespace {

std::seed_seq make_seed_seq(std::initializer_list<std::uint64_t> words) {
    std::vector<std::uint32_t> halves;
    halves.reserve(words.size() * 2);
    for (std::uint64_t w : words) {
        halves.push_back(static_cast<std::uint32_t>(w));
        halves.push_back(static_cast<std::uint32_t>(w >> 32));
    }
    return std::seed_seq(halves.begin(), halves.end());
}

} // namespace

Rng::Rng(std::uint64_t seed) : Rng({seed}) {}

Rng::Rng(std::initializer_list<std::uint64_t> seed_words) {
    auto seq = make_seed_seq(seed_words);
    engine_.seed(seq);
}

void Rng::fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
        std::uint64_t word = engine_();
        for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
            out[i] = static_cast<std::uint8_t>(word);
            word >>= 8;
        }
    }
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
    // Rejection sampling on the largest multiple of bound.
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    for (;;) {
        const std::uint64_t x = engine_();
        if (x < limit) return x % bound;
    }
}

double Rng::uniform(double low, double high) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1p-53;
    return low + (high - low) * unit;
}

} // namespace przk
