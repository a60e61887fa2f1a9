#pragma once
// Physical serialization of two-part encodings.
//
// Stream layout: a 6-byte envelope (magic, version, sequence length as a
// 32-bit big-endian integer), then a bit-packed header (route bit, model
// indices) and an arithmetically coded payload under the selected model's
// single-letter pmf, quantized to 16-bit cumulative frequencies that both
// sides derive deterministically from the same code context.

#include "mdl/codec.hpp"

#include <cstdint>
#include <vector>

namespace mdl {

class BitWriter {
 public:
  void put_bit(int b);
  void put_bits(std::uint64_t v, int nbits);  // most-significant bit first
  std::size_t bit_count() const { return bits_; }
  // Pads the final byte with zeros.
  std::vector<std::uint8_t> finish();

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

class BitReader {
 public:
  BitReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}
  // Reads past the end as zero bits (the encoder's trailing pad).
  int get_bit();
  std::uint64_t get_bits(int nbits);

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

// Cumulative symbol frequencies on a 16-bit scale, derived from a pmf by
// largest-remainder rounding with every positive-probability symbol kept
// codable.  Deterministic, so encoder and decoder agree bit for bit.
struct QuantizedPmf {
  std::vector<std::uint32_t> cum;  // size M+1, cum[0] = 0, cum[M] = 65536
  static QuantizedPmf from_pmf(const FinitePmf& p);
};

class ArithmeticEncoder {
 public:
  explicit ArithmeticEncoder(BitWriter& w) : w_(w) {}
  void encode(std::size_t symbol, const QuantizedPmf& q);
  void finish();

 private:
  void emit(int bit);
  BitWriter& w_;
  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0xFFFFFFFFull;
  std::uint64_t pending_ = 0;
};

class ArithmeticDecoder {
 public:
  explicit ArithmeticDecoder(BitReader& r);
  std::size_t decode(const QuantizedPmf& q);

 private:
  BitReader& r_;
  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0xFFFFFFFFull;
  std::uint64_t value_ = 0;
};

// Full stream for a symbol sequence (each symbol < family alphabet size).
std::vector<std::uint8_t> compress_sequence(const Codec& codec,
                                            const std::vector<std::size_t>& symbols);

// Sequence length stored in a stream's envelope (validates magic/version).
std::uint64_t peek_sequence_length(const std::vector<std::uint8_t>& stream);

// Inverse of compress_sequence; the codec must match the encoding context
// (same family, configuration, and sample size).
std::vector<std::size_t> decompress_sequence(const Codec& codec,
                                             const std::vector<std::uint8_t>& stream);

// Size accounting for tests and reports: the information-content baseline
// (model cost at weight one plus data nats plus one route bit) against the
// bits actually spent past the envelope.
struct StreamAccounting {
  double ideal_nats = 0.0;
  std::size_t stream_bits = 0;  // excluding the fixed envelope
  double overhead_bits = 0.0;
};

StreamAccounting account_stream(const Codec& codec, const std::vector<std::size_t>& symbols);

}  // namespace mdl
