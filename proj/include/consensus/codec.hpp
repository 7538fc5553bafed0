#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "consensus/schedule.hpp"

namespace consensus {

struct Codeword {
    std::uint32_t index = 0;
    bool clipped = false;  // diagnostic only, never transmitted
};

// n-bit uniform quantizer on [lo, lo+size]: cell width size/2^n, reconstruction at
// the cell midpoint, out-of-range inputs clamped to the nearest boundary cell (and
// flagged clipped).
Codeword uniform_encode(double x, double lo, double size, int bits);
double uniform_decode(std::uint32_t index, double lo, double size, int bits);

// Per-node quantizer with synchronized encoder/decoder state.  encode() is a pure
// function of the current state; apply_index() is the only state transition, and it
// consumes nothing but the transmitted index, so an encoder and a decoder fed the
// same index stream hold identical state forever by construction.
class Codec {
public:
    virtual ~Codec() = default;
    virtual int bits() const = 0;
    virtual Codeword encode(double x) const = 0;
    virtual double apply_index(std::uint32_t index) = 0;
    virtual std::unique_ptr<Codec> clone() const = 0;

    struct StepResult {
        Codeword codeword;
        double z_hat;
    };
    // Encoder-side convenience: quantize x and advance the local decoder replica.
    StepResult step(double x) {
        const Codeword cw = encode(x);
        return {cw, apply_index(cw.index)};
    }
};

// Fresh per-node codec instances, all initialized identically.
using CodecFactory = std::function<std::unique_ptr<Codec>()>;

// Fixed-interval quantizer: every value is encoded on the same [lo, lo+size].
class UniformCodec final : public Codec {
public:
    UniformCodec(double lo, double size, int bits);
    int bits() const override { return bits_; }
    Codeword encode(double x) const override;
    double apply_index(std::uint32_t index) override;
    std::unique_ptr<Codec> clone() const override { return std::make_unique<UniformCodec>(*this); }

private:
    double lo_, size_;
    int bits_;
};

// Refining quantizer: value t is encoded on the interval of size schedule[t]
// centered at the previous reconstruction (at t = 0, at the midpoint of the known
// initial interval).  Past the end of the schedule the last size is reused.
class ProgressiveCodec final : public Codec {
public:
    ProgressiveCodec(std::shared_ptr<const RangeSchedule> schedule, int bits,
                     double initial_center);
    int bits() const override { return bits_; }
    Codeword encode(double x) const override;
    double apply_index(std::uint32_t index) override;
    std::unique_ptr<Codec> clone() const override {
        return std::make_unique<ProgressiveCodec>(*this);
    }

    double current_size() const;

private:
    std::shared_ptr<const RangeSchedule> schedule_;
    int bits_;
    double prev_hat_;
    int t_ = 0;
};

// Difference quantizer with a zooming scale: encodes (x - prev_hat)/f on [-1, 1];
// the scale contracts by k_in while the codeword stays in the interior and expands
// by k_out when it lands in a boundary cell.  The boundary-cell test is the
// saturation proxy both ends can evaluate from the index alone (the encoder clamps
// out-of-range differences into exactly those cells).  With a single bit both cells
// are boundary cells, so no saturation is ever inferred and the scale only
// contracts; the scheme needs n >= 2 to track.
class ZoomCodec final : public Codec {
public:
    ZoomCodec(int bits, double initial_center, double f0, double k_in, double k_out);
    int bits() const override { return bits_; }
    Codeword encode(double x) const override;
    double apply_index(std::uint32_t index) override;
    std::unique_ptr<Codec> clone() const override { return std::make_unique<ZoomCodec>(*this); }

    double scale() const { return f_; }

private:
    int bits_;
    double prev_hat_;
    double f_;
    double k_in_, k_out_;
};

// Delta modulation with a sign bit, n-1 magnitude bits and a multiplicative step
// adaptation: the step grows by K when consecutive codewords agree in sign and
// shrinks by 1/K otherwise.  Reconstruction always moves by +-(mag + 0.5) * step.
class AdaptiveCodec final : public Codec {
public:
    AdaptiveCodec(int bits, double initial_center, double step0, double k);
    int bits() const override { return bits_; }
    Codeword encode(double x) const override;
    double apply_index(std::uint32_t index) override;
    std::unique_ptr<Codec> clone() const override { return std::make_unique<AdaptiveCodec>(*this); }

    double step_size() const { return step_; }

private:
    int bits_;
    double prev_hat_;
    double step_;
    double k_;
    bool has_prev_ = false;
    bool prev_negative_ = false;
};

CodecFactory make_uniform_factory(double lo, double size, int bits);
CodecFactory make_progressive_factory(std::shared_ptr<const RangeSchedule> schedule, int bits,
                                      double initial_center);
CodecFactory make_zoom_factory(int bits, double initial_center, double f0 = 0.5,
                               double k_in = 0.5, double k_out = 2.0);
CodecFactory make_adaptive_factory(int bits, double initial_center, double step0,
                                   double k = 1.2);

}  // namespace consensus
