#include "consensus/bitpack.hpp"

#include "consensus/errors.hpp"

namespace consensus {

void BitWriter::write(std::uint32_t value, int width) {
    if (width < 1 || width > 32) throw ParameterOutOfRange("bit width must lie in [1, 32]");
    if (width < 32 && (value >> width) != 0)
        throw ParameterOutOfRange("value does not fit in " + std::to_string(width) + " bits");
    for (int k = 0; k < width; ++k) {
        const std::size_t b = bits_ + k;
        if (b / 8 == bytes_.size()) bytes_.push_back(0);
        bytes_[b / 8] |= static_cast<std::uint8_t>(((value >> k) & 1u) << (b % 8));
    }
    bits_ += width;
}

std::uint32_t BitReader::read(int width) {
    if (width < 1 || width > 32) throw ParameterOutOfRange("bit width must lie in [1, 32]");
    if (pos_ + width > bytes_->size() * 8)
        throw ParameterOutOfRange("bit stream exhausted");
    std::uint32_t value = 0;
    for (int k = 0; k < width; ++k) {
        const std::size_t b = pos_ + k;
        value |= static_cast<std::uint32_t>(((*bytes_)[b / 8] >> (b % 8)) & 1u) << k;
    }
    pos_ += width;
    return value;
}

std::vector<std::uint8_t> pack_index_streams(const std::vector<std::vector<std::uint32_t>>& per_node,
                                             int width) {
    BitWriter w;
    for (const auto& stream : per_node)
        for (std::uint32_t v : stream) w.write(v, width);
    return w.bytes();
}

std::vector<std::vector<std::uint32_t>> unpack_index_streams(const std::vector<std::uint8_t>& bytes,
                                                             int nodes, int steps, int width) {
    BitReader r(bytes);
    std::vector<std::vector<std::uint32_t>> out(nodes);
    for (auto& stream : out) {
        stream.resize(steps);
        for (int t = 0; t < steps; ++t) stream[t] = r.read(width);
    }
    return out;
}

}  // namespace consensus
