#ifndef PRZK_BYTES_HPP
#define PRZK_BYTES_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace przk {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string to_hex(ByteView data);

// Lowercase or uppercase hex, even length. Throws DecodeError otherwise.
Bytes from_hex(std::string_view hex);

void append_u32_be(Bytes& out, std::uint32_t v);
void append_u64_be(Bytes& out, std::uint64_t v);
std::uint32_t read_u32_be(ByteView in);
std::uint64_t read_u64_be(ByteView in);

Bytes u32_be(std::uint32_t v);
Bytes u64_be(std::uint64_t v);

bool contains_subsequence(ByteView haystack, ByteView needle);

} // namespace przk

#endif
