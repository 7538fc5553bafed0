#include "consensus/codec.hpp"

#include <cmath>

#include "consensus/errors.hpp"

namespace consensus {

namespace {

void check_width(int bits) {
    if (bits < 1 || bits > 32)
        throw ParameterOutOfRange("codec bit width must lie in [1, 32], got " +
                                  std::to_string(bits));
}

}  // namespace

Codeword uniform_encode(double x, double lo, double size, int bits) {
    check_width(bits);
    if (!(size > 0.0)) throw ParameterOutOfRange("uniform_encode needs size > 0");
    const double levels = std::ldexp(1.0, bits);
    const double delta = size / levels;
    const double q = (x - lo) / delta;

    Codeword cw;
    if (q < 0.0) {
        cw.index = 0;
        cw.clipped = true;
    } else if (q >= levels) {
        cw.index = static_cast<std::uint32_t>(levels - 1.0);
        cw.clipped = true;
    } else {
        cw.index = static_cast<std::uint32_t>(q);
    }
    return cw;
}

double uniform_decode(std::uint32_t index, double lo, double size, int bits) {
    check_width(bits);
    if (!(size > 0.0)) throw ParameterOutOfRange("uniform_decode needs size > 0");
    const double levels = std::ldexp(1.0, bits);
    if (static_cast<double>(index) >= levels)
        throw ParameterOutOfRange("uniform_decode: index out of range");
    return lo + (static_cast<double>(index) + 0.5) * (size / levels);
}

UniformCodec::UniformCodec(double lo, double size, int bits) : lo_(lo), size_(size), bits_(bits) {
    check_width(bits);
    if (!(size > 0.0)) throw ParameterOutOfRange("UniformCodec needs size > 0");
}

Codeword UniformCodec::encode(double x) const { return uniform_encode(x, lo_, size_, bits_); }

double UniformCodec::apply_index(std::uint32_t index) {
    return uniform_decode(index, lo_, size_, bits_);
}

ProgressiveCodec::ProgressiveCodec(std::shared_ptr<const RangeSchedule> schedule, int bits,
                                   double initial_center)
    : schedule_(std::move(schedule)), bits_(bits), prev_hat_(initial_center) {
    check_width(bits);
    if (!schedule_ || schedule_->sizes.empty())
        throw ParameterOutOfRange("ProgressiveCodec needs a non-empty range schedule");
}

double ProgressiveCodec::current_size() const {
    const auto& sizes = schedule_->sizes;
    const std::size_t i = std::min<std::size_t>(t_, sizes.size() - 1);
    return sizes[i];
}

Codeword ProgressiveCodec::encode(double x) const {
    const double s = current_size();
    return uniform_encode(x, prev_hat_ - s / 2.0, s, bits_);
}

double ProgressiveCodec::apply_index(std::uint32_t index) {
    const double s = current_size();
    prev_hat_ = uniform_decode(index, prev_hat_ - s / 2.0, s, bits_);
    ++t_;
    return prev_hat_;
}

ZoomCodec::ZoomCodec(int bits, double initial_center, double f0, double k_in, double k_out)
    : bits_(bits), prev_hat_(initial_center), f_(f0), k_in_(k_in), k_out_(k_out) {
    check_width(bits);
    if (!(f0 > 0.0) || !(k_in > 0.0) || !(k_out > 0.0))
        throw ParameterOutOfRange("ZoomCodec needs positive f0, k_in, k_out");
}

Codeword ZoomCodec::encode(double x) const {
    return uniform_encode((x - prev_hat_) / f_, -1.0, 2.0, bits_);
}

double ZoomCodec::apply_index(std::uint32_t index) {
    const double dhat = uniform_decode(index, -1.0, 2.0, bits_);
    prev_hat_ += f_ * dhat;
    const std::uint32_t top = static_cast<std::uint32_t>(std::ldexp(1.0, bits_) - 1.0);
    const bool saturated = bits_ >= 2 && (index == 0 || index == top);
    f_ *= saturated ? k_out_ : k_in_;
    return prev_hat_;
}

AdaptiveCodec::AdaptiveCodec(int bits, double initial_center, double step0, double k)
    : bits_(bits), prev_hat_(initial_center), step_(step0), k_(k) {
    check_width(bits);
    if (!(step0 > 0.0) || !(k >= 1.0))
        throw ParameterOutOfRange("AdaptiveCodec needs step0 > 0 and K >= 1");
}

Codeword AdaptiveCodec::encode(double x) const {
    const double d = x - prev_hat_;
    const bool negative = d < 0.0;
    const double mag_levels = std::ldexp(1.0, bits_ - 1);  // 1 when bits == 1
    const double q = std::abs(d) / step_;

    Codeword cw;
    std::uint32_t mag;
    if (q >= mag_levels) {
        mag = static_cast<std::uint32_t>(mag_levels - 1.0);
        cw.clipped = true;
    } else {
        mag = static_cast<std::uint32_t>(q);
    }
    cw.index = (static_cast<std::uint32_t>(negative) << (bits_ - 1)) | mag;
    return cw;
}

double AdaptiveCodec::apply_index(std::uint32_t index) {
    const bool negative = (index >> (bits_ - 1)) & 1u;
    const std::uint32_t mag =
        bits_ == 1 ? 0u : index & ((1u << (bits_ - 1)) - 1u);
    const double delta = (static_cast<double>(mag) + 0.5) * step_;
    prev_hat_ += negative ? -delta : delta;

    if (has_prev_) {
        if (negative == prev_negative_)
            step_ *= k_;
        else
            step_ /= k_;
    }
    has_prev_ = true;
    prev_negative_ = negative;
    return prev_hat_;
}

CodecFactory make_uniform_factory(double lo, double size, int bits) {
    return [=] { return std::make_unique<UniformCodec>(lo, size, bits); };
}

CodecFactory make_progressive_factory(std::shared_ptr<const RangeSchedule> schedule, int bits,
                                      double initial_center) {
    return [=] { return std::make_unique<ProgressiveCodec>(schedule, bits, initial_center); };
}

CodecFactory make_zoom_factory(int bits, double initial_center, double f0, double k_in,
                               double k_out) {
    return [=] { return std::make_unique<ZoomCodec>(bits, initial_center, f0, k_in, k_out); };
}

CodecFactory make_adaptive_factory(int bits, double initial_center, double step0, double k) {
    return [=] { return std::make_unique<AdaptiveCodec>(bits, initial_center, step0, k); };
}

}  // namespace consensus
