#include "cimqubo/crossbar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include "cimqubo/errors.hpp"
#include "cimqubo/rng.hpp"
#include "cimqubo/text.hpp"

namespace cimq {

namespace {

constexpr unsigned kMaxBits = 24;

double round_half_away(double v) { return std::copysign(std::floor(std::abs(v) + 0.5), v); }

void check_tile(std::size_t tile_rows, std::size_t tile_cols) {
  if (tile_rows == 0 || tile_cols == 0) throw ConfigError("tile dimensions must be positive");
}

// Truncated normal around `mean` with spread `sd`, rejecting beyond 4 sd.
double sample_truncated(Rng& rng, double mean, double sd) {
  if (sd <= 0.0) return mean;
  double z;
  do z = rng.normal();
  while (std::abs(z) > 4.0);
  return mean + sd * z;
}

// Samples the die offset then every cell's ON current in a fixed order so the
// draw sequence does not depend on the stored values.
void sample_currents(std::vector<BitPlane>& planes, const DeviceParams& dev, std::uint64_t seed,
                     double& die_offset) {
  Rng rng(seed);
  die_offset = dev.die_rel_sigma > 0.0 ? sample_truncated(rng, 0.0, dev.die_rel_sigma) : 0.0;
  const double mean = dev.i_on_mean * (1.0 + die_offset);
  const double sd = dev.i_on_mean * dev.i_on_rel_sigma;
  for (auto& plane : planes)
    for (auto& i : plane.i_on) i = sample_truncated(rng, mean, sd);
}

}  // namespace

void DeviceParams::validate() const {
  if (!(i_on_mean > 0.0)) throw ConfigError("i_on_mean must be > 0");
  if (!(i_on_rel_sigma >= 0.0)) throw ConfigError("i_on_rel_sigma must be >= 0");
  if (!(i_off_ratio >= 0.0 && i_off_ratio < 1.0)) throw ConfigError("i_off_ratio must be in [0, 1)");
  if (!(die_rel_sigma >= 0.0)) throw ConfigError("die_rel_sigma must be >= 0");
}

QuantizedQubo quantize(const Matrix& qprime, unsigned bits) {
  if (bits < 1 || bits > kMaxBits) throw ConfigError("quantization bits must be in [1, 24]");
  QuantizedQubo qq;
  qq.bits = bits;
  qq.p = qprime.rows;
  qq.q = qprime.cols;
  const double levels = static_cast<double>((1u << bits) - 1);
  const double peak = qprime.max_abs();
  qq.scale = peak > 0.0 ? peak / levels : 1.0;
  qq.plus.assign(qq.p * qq.q, 0);
  qq.minus.assign(qq.p * qq.q, 0);
  qq.error = Matrix(qq.p, qq.q);
  for (std::size_t r = 0; r < qq.p; ++r) {
    for (std::size_t c = 0; c < qq.q; ++c) {
      const double v = qprime(r, c);
      const double code = std::min(levels, round_half_away(std::abs(v) / qq.scale));
      auto& dst = v >= 0.0 ? qq.plus : qq.minus;
      dst[r * qq.q + c] = static_cast<std::uint32_t>(code);
      qq.error(r, c) = v - qq.dequantized(r, c);
    }
  }
  return qq;
}

double quantized_bilinear(const QuantizedQubo& qq, std::span<const Bit> x_h, std::span<const Bit> x_v) {
  if (x_h.size() != qq.p || x_v.size() != qq.q) throw DimensionError("quantized_bilinear: size mismatch");
  long long acc = 0;
  for (std::size_t r = 0; r < qq.p; ++r) {
    if (!x_h[r]) continue;
    for (std::size_t c = 0; c < qq.q; ++c)
      if (x_v[c])
        acc += static_cast<long long>(qq.plus[r * qq.q + c]) - static_cast<long long>(qq.minus[r * qq.q + c]);
  }
  return qq.scale * static_cast<double>(acc);
}

double CrossbarStack::cell_current(std::size_t plane, std::size_t row, std::size_t col) const {
  const BitPlane& pl = planes_.at(plane);
  const std::size_t idx = row * cols_ + col;
  return pl.state[idx] ? pl.i_on[idx] : dev_.i_on_mean * dev_.i_off_ratio;
}

CellLocation CrossbarStack::locate(std::size_t plane, std::size_t row, std::size_t col) const {
  if (plane >= planes_.size() || row >= phys_rows() || col >= cols_)
    throw DimensionError("locate: cell out of range");
  const std::size_t tile = (plane * row_blocks() + row / tile_rows_) * col_blocks() + col / tile_cols_;
  return {tile, row % tile_rows_, col % tile_cols_};
}

double CrossbarStack::full_scale(const AdcParams& adc) const {
  if (adc.full_scale > 0.0) return adc.full_scale;
  return dev_.i_on_mean * static_cast<double>(std::bit_ceil(tile_rows_ + 1));
}

double CrossbarStack::adc_lsb(const AdcParams& adc) const {
  if (adc.bits == 0) return 0.0;
  return full_scale(adc) / std::ldexp(1.0, static_cast<int>(adc.bits));
}

double CrossbarStack::energy_lsb(const AdcParams& adc) const { return scale_ * adc_lsb(adc) / dev_.i_on_mean; }

CrossbarStack program(const QuantizedQubo& qq, const DeviceParams& dev, std::uint64_t seed, std::size_t tile_rows,
                      std::size_t tile_cols) {
  dev.validate();
  check_tile(tile_rows, tile_cols);
  CrossbarStack s;
  s.rows_ = qq.p;
  s.cols_ = qq.q;
  s.cells_per_element_ = 1;
  s.tile_rows_ = tile_rows;
  s.tile_cols_ = tile_cols;
  s.scale_ = qq.scale;
  s.dev_ = dev;
  const std::size_t cells = qq.p * qq.q;
  for (int sign : {+1, -1}) {
    const auto& codes = sign > 0 ? qq.plus : qq.minus;
    for (unsigned m = 0; m < qq.bits; ++m) {
      BitPlane pl;
      pl.sign = sign;
      pl.bit = m;
      pl.state.resize(cells);
      pl.i_on.resize(cells);
      for (std::size_t k = 0; k < cells; ++k) pl.state[k] = static_cast<Bit>((codes[k] >> m) & 1u);
      s.planes_.push_back(std::move(pl));
    }
  }
  sample_currents(s.planes_, dev, seed, s.die_offset_);
  return s;
}

CrossbarStack program_ternary(const Matrix& values, const DeviceParams& dev, std::uint64_t seed,
                              std::size_t tile_rows, std::size_t tile_cols) {
  dev.validate();
  check_tile(tile_rows, tile_cols);
  CrossbarStack s;
  s.rows_ = values.rows;
  s.cols_ = values.cols;
  s.cells_per_element_ = 2;
  s.tile_rows_ = tile_rows;
  s.tile_cols_ = tile_cols;
  s.scale_ = 1.0;
  s.dev_ = dev;
  BitPlane pl;
  pl.state.assign(2 * values.rows * values.cols, 0);
  pl.i_on.resize(pl.state.size());
  for (std::size_t a = 0; a < values.rows; ++a) {
    for (std::size_t b = 0; b < values.cols; ++b) {
      const double v = values(a, b);
      if (v != 0.0 && v != 1.0 && v != 2.0)
        throw EncodingError("ternary mapping needs entries in {0,1,2}, got " + text::format_double(v));
      pl.state[(2 * a) * values.cols + b] = v >= 1.0;
      pl.state[(2 * a + 1) * values.cols + b] = v >= 2.0;
    }
  }
  s.planes_.push_back(std::move(pl));
  sample_currents(s.planes_, dev, seed, s.die_offset_);
  return s;
}

double vmv(const CrossbarStack& stack, std::span<const Bit> x_h, std::span<const Bit> x_v, const AdcParams& adc,
           VmvDiagnostics* diag) {
  if (x_h.size() != stack.logical_rows() || x_v.size() != stack.logical_cols())
    throw DimensionError("vmv: input sizes do not match the programmed array");
  if (adc.bits > kMaxBits) throw ConfigError("adc bits must be <= 24");
  const std::size_t cols = stack.logical_cols();
  const std::size_t cpe = stack.cells_per_element();
  const std::size_t tr = stack.tile_rows();
  const double off = stack.device().i_on_mean * stack.device().i_off_ratio;
  const double lsb = stack.adc_lsb(adc);
  const double max_code = adc.bits ? std::ldexp(1.0, static_cast<int>(adc.bits)) - 1.0 : 0.0;

  // Active physical rows grouped by tile row block.
  std::vector<std::vector<std::size_t>> active(stack.row_blocks());
  for (std::size_t a = 0; a < x_h.size(); ++a) {
    if (!x_h[a]) continue;
    for (std::size_t k = 0; k < cpe; ++k) {
      const std::size_t r = a * cpe + k;
      active[r / tr].push_back(r);
    }
  }

  double total = 0.0;
  const auto& planes = stack.planes();
  for (std::size_t pi = 0; pi < planes.size(); ++pi) {
    const BitPlane& pl = planes[pi];
    double plane_sum = 0.0;
    for (std::size_t b = 0; b < cols; ++b) {
      if (!x_v[b]) continue;
      for (std::size_t blk = 0; blk < active.size(); ++blk) {
        double current = 0.0;
        for (std::size_t r : active[blk]) {
          const std::size_t idx = r * cols + b;
          current += pl.state[idx] ? pl.i_on[idx] : off;
        }
        std::uint32_t code = 0;
        if (adc.bits) {
          code = static_cast<std::uint32_t>(std::clamp(std::nearbyint(current / lsb), 0.0, max_code));
          plane_sum += code * lsb;
        } else {
          plane_sum += current;
        }
        if (diag) diag->columns.push_back({pi, blk, b, current, code});
      }
    }
    total += pl.sign * std::ldexp(plane_sum, static_cast<int>(pl.bit));
  }
  return total * stack.scale() / stack.device().i_on_mean;
}

void write_stack(std::ostream& os, const CrossbarStack& s) {
  os << "crossbar " << s.logical_rows() << ' ' << s.logical_cols() << ' ' << s.planes().size() << '\n';
  os << "cells_per_element " << s.cells_per_element() << '\n';
  os << "tile " << s.tile_rows() << ' ' << s.tile_cols() << ' ' << s.tile_count() << '\n';
  os << "scale " << text::format_double(s.scale()) << '\n';
  os << "die_offset " << text::format_fixed(s.die_offset(), 6) << '\n';
  const std::size_t rows = s.phys_rows(), cols = s.logical_cols();
  for (std::size_t pi = 0; pi < s.planes().size(); ++pi) {
    const BitPlane& pl = s.planes()[pi];
    os << "plane " << pi << ' ' << (pl.sign > 0 ? '+' : '-') << ' ' << pl.bit << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) os << (c ? " " : "") << int(pl.state[r * cols + c]);
      os << '\n';
    }
    os << "currents " << pi << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) os << (c ? " " : "") << text::format_fixed(s.cell_current(pi, r, c), 6);
      os << '\n';
    }
  }
}

namespace {

HwOracle wrap_stack(const CompressedQubo& c, CrossbarStack stack, const AdcParams& adc) {
  auto st = std::make_shared<const CrossbarStack>(std::move(stack));
  HwOracle hw;
  hw.stack = st;
  hw.energy_lsb = st->energy_lsb(adc);
  hw.eps_trap = hw.energy_lsb > 0.0 ? hw.energy_lsb / 2.0 : 1e-9;
  auto rows = std::make_shared<const std::vector<std::size_t>>(c.row_vars);
  auto cols = std::make_shared<const std::vector<std::size_t>>(c.col_vars);
  auto linear = std::make_shared<const std::vector<double>>(c.linear);
  const double constant = c.constant;
  hw.oracle = [st, rows, cols, linear, constant, adc](std::span<const Bit> x) {
    if (x.size() != linear->size()) throw DimensionError("oracle: vector size mismatch");
    BinaryVector xh(rows->size()), xv(cols->size());
    for (std::size_t a = 0; a < xh.size(); ++a) xh[a] = x[(*rows)[a]];
    for (std::size_t b = 0; b < xv.size(); ++b) xv[b] = x[(*cols)[b]];
    double e = constant;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i]) e += (*linear)[i];
    return e + vmv(*st, xh, xv, adc);
  };
  return hw;
}

}  // namespace

HwOracle make_hw_oracle(const CompressedQubo& c, unsigned bits, const DeviceParams& dev, const AdcParams& adc,
                        std::uint64_t seed) {
  return wrap_stack(c, program(quantize(c, bits), dev, seed), adc);
}

HwOracle make_ternary_hw_oracle(const CompressedQubo& c, const DeviceParams& dev, const AdcParams& adc,
                                std::uint64_t seed) {
  return wrap_stack(c, program_ternary(c.qprime, dev, seed), adc);
}

}  // namespace cimq
