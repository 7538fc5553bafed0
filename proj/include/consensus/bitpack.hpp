#pragma once

#include <cstdint>
#include <vector>

namespace consensus {

// Packs fixed-width codec indices into a byte stream, little-endian within and
// across bytes: value bit k lands at stream bit position (count_so_far * width + k),
// stream bit b lives in byte b/8 at bit b%8.
class BitWriter {
public:
    void write(std::uint32_t value, int width);
    std::size_t bit_count() const { return bits_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t bits_ = 0;
};

class BitReader {
public:
    explicit BitReader(const std::vector<std::uint8_t>& bytes) : bytes_(&bytes) {}
    std::uint32_t read(int width);
    std::size_t bits_consumed() const { return pos_; }

private:
    const std::vector<std::uint8_t>* bytes_;
    std::size_t pos_ = 0;
};

// Archive layout for a whole run: node-major, iteration-minor (node 0's T+1
// indices first, then node 1's, ...), each index exactly `width` bits.
std::vector<std::uint8_t> pack_index_streams(const std::vector<std::vector<std::uint32_t>>& per_node,
                                             int width);
std::vector<std::vector<std::uint32_t>> unpack_index_streams(const std::vector<std::uint8_t>& bytes,
                                                             int nodes, int steps, int width);

}  // namespace consensus
