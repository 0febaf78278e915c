#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "cimqubo/annealer.hpp"
#include "cimqubo/compression.hpp"
#include "cimqubo/qubo.hpp"

namespace cimq {

// Behavioral cell model: currents in units of the mean ON current.
struct DeviceParams {
  double i_on_mean = 1.0;
  double i_on_rel_sigma = 0.05;  // cell-to-cell spread of the ON current
  double i_off_ratio = 1e-3;     // OFF current / mean ON current
  double die_rel_sigma = 0.0;    // die-to-die offset, one draw per programmed stack

  void validate() const;  // throws ConfigError
};

// Uniform quantizer per tile column: LSB = full_scale / 2^bits,
// code = clamp(round(I / LSB), 0, 2^bits - 1). full_scale <= 0 selects
// i_on_mean * 2^ceil(log2(tile_rows + 1)), the smallest power-of-two range
// holding a fully-ON column. bits == 0 bypasses the ADC (ideal summed current).
struct AdcParams {
  unsigned bits = 8;
  double full_scale = 0.0;
};

struct QuantizedQubo {
  double scale = 1.0;  // value of one integer step
  unsigned bits = 1;
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<std::uint32_t> plus;   // row-major p x q codes of max(Q', 0)
  std::vector<std::uint32_t> minus;  // row-major p x q codes of max(-Q', 0)
  Matrix error;                      // Q' - scale * (plus - minus)

  double dequantized(std::size_t r, std::size_t c) const {
    return scale * (static_cast<double>(plus[r * q + c]) - static_cast<double>(minus[r * q + c]));
  }
};

// scale = max|Q'| / (2^bits - 1) (1 for an all-zero matrix); magnitudes are
// rounded half away from zero.
QuantizedQubo quantize(const Matrix& qprime, unsigned bits);
inline QuantizedQubo quantize(const CompressedQubo& c, unsigned bits) { return quantize(c.qprime, bits); }

// scale * x_h^T (plus - minus) x_v evaluated digitally.
double quantized_bilinear(const QuantizedQubo& qq, std::span<const Bit> x_h, std::span<const Bit> x_v);

struct CellLocation {
  std::size_t tile;
  std::size_t row;
  std::size_t col;
  friend bool operator==(const CellLocation&, const CellLocation&) = default;
};

// One sign/bit plane: a (phys_rows x cols) grid of cells.
struct BitPlane {
  int sign = +1;              // +1 for Q+, -1 for Q-
  unsigned bit = 0;           // weight 2^bit (always 0 on the ternary path)
  std::vector<Bit> state;     // row-major cell states
  std::vector<double> i_on;   // sampled ON current of each cell
};

class CrossbarStack {
 public:
  static constexpr std::size_t kTileDim = 32;

  std::size_t logical_rows() const noexcept { return rows_; }
  std::size_t logical_cols() const noexcept { return cols_; }
  std::size_t phys_rows() const noexcept { return rows_ * cells_per_element_; }
  std::size_t cells_per_element() const noexcept { return cells_per_element_; }
  std::size_t tile_rows() const noexcept { return tile_rows_; }
  std::size_t tile_cols() const noexcept { return tile_cols_; }
  std::size_t row_blocks() const noexcept { return (phys_rows() + tile_rows_ - 1) / tile_rows_; }
  std::size_t col_blocks() const noexcept { return (cols_ + tile_cols_ - 1) / tile_cols_; }
  std::size_t tile_count() const noexcept { return planes_.size() * row_blocks() * col_blocks(); }
  bool ternary() const noexcept { return cells_per_element_ == 2; }
  double scale() const noexcept { return scale_; }
  double die_offset() const noexcept { return die_offset_; }
  const DeviceParams& device() const noexcept { return dev_; }
  const std::vector<BitPlane>& planes() const noexcept { return planes_; }

  // Current drawn by a cell in the given plane at physical (row, col).
  double cell_current(std::size_t plane, std::size_t row, std::size_t col) const;

  // Physical placement of the cell at (plane, physical row, col).
  CellLocation locate(std::size_t plane, std::size_t row, std::size_t col) const;

  // Effective full scale and LSB for an ADC configuration.
  double full_scale(const AdcParams& adc) const;
  double adc_lsb(const AdcParams& adc) const;
  // Energy represented by one ADC step (scale * LSB / i_on_mean); 0 when bypassed.
  double energy_lsb(const AdcParams& adc) const;

 private:
  friend CrossbarStack program(const QuantizedQubo&, const DeviceParams&, std::uint64_t, std::size_t, std::size_t);
  friend CrossbarStack program_ternary(const Matrix&, const DeviceParams&, std::uint64_t, std::size_t,
                                       std::size_t);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t cells_per_element_ = 1;
  std::size_t tile_rows_ = kTileDim;
  std::size_t tile_cols_ = kTileDim;
  double scale_ = 1.0;
  double die_offset_ = 0.0;
  DeviceParams dev_;
  std::vector<BitPlane> planes_;
};

// Bit plane m of each sign holds bit m of the integer codes (planes ordered
// +0..+(M-1), -0..-(M-1)). ON currents are drawn for every cell in plane/row/
// column order from Normal(i_on (1 + die), i_on * sigma) truncated at 4 sigma.
CrossbarStack program(const QuantizedQubo& qq, const DeviceParams& dev, std::uint64_t seed,
                      std::size_t tile_rows = CrossbarStack::kTileDim,
                      std::size_t tile_cols = CrossbarStack::kTileDim);

// Entries in {0,1,2}; element (a,b) occupies physical rows 2a and 2a+1 of
// column b with as many ON cells as its value. Both rows are driven by x_h[a].
// Throws EncodingError for any other value.
CrossbarStack program_ternary(const Matrix& values, const DeviceParams& dev, std::uint64_t seed,
                              std::size_t tile_rows = CrossbarStack::kTileDim,
                              std::size_t tile_cols = CrossbarStack::kTileDim);

struct ColumnReadout {
  std::size_t plane;
  std::size_t row_block;
  std::size_t col;
  double current;
  std::uint32_t code;  // 0 when the ADC is bypassed
};

struct VmvDiagnostics {
  std::vector<ColumnReadout> columns;  // active columns only
};

// x_h^T Q' x_v read from the array: per active tile column the summed cell
// current is digitized, codes are accumulated per plane, then recombined with
// weights +-2^bit and scaled back to energy units.
double vmv(const CrossbarStack& stack, std::span<const Bit> x_h, std::span<const Bit> x_v,
           const AdcParams& adc, VmvDiagnostics* diag = nullptr);

// Text dump: dims, tile size, then for each plane its cell states and sampled
// ON currents (6 decimals).
void write_stack(std::ostream& os, const CrossbarStack& stack);

struct HwOracle {
  EnergyOracle oracle;
  std::shared_ptr<const CrossbarStack> stack;
  double energy_lsb = 0.0;
  double eps_trap = 1e-9;  // half an energy LSB (1e-9 when the ADC is bypassed)
};

// Oracle reading the bilinear part from a programmed stack; the linear and
// constant terms are added exactly. Device samples are fixed at creation.
HwOracle make_hw_oracle(const CompressedQubo& c, unsigned bits, const DeviceParams& dev, const AdcParams& adc,
                        std::uint64_t seed);

// Same, using the 2-cell ternary mapping (Q' entries must be in {0,1,2}).
HwOracle make_ternary_hw_oracle(const CompressedQubo& c, const DeviceParams& dev, const AdcParams& adc,
                                std::uint64_t seed);

}  // namespace cimq
