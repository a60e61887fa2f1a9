#include "mdl/bitstream.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace mdl {

namespace {

constexpr std::uint64_t kHalf = 0x80000000ull;
constexpr std::uint64_t kQuarter = 0x40000000ull;
constexpr std::uint64_t kThreeQuarter = 0xC0000000ull;
constexpr std::uint64_t kMask = 0xFFFFFFFFull;
constexpr std::uint32_t kScale = 1u << 16;

constexpr std::uint8_t kMagic = 0x4D;
constexpr std::uint8_t kVersion = 0x01;

int bits_for(std::uint64_t states) {
  int b = 0;
  while ((std::uint64_t{1} << b) < states) ++b;
  return b;
}

}  // namespace

void BitWriter::put_bit(int b) {
  if (bits_ % 8 == 0) bytes_.push_back(0);
  if (b) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ % 8));
  ++bits_;
}

void BitWriter::put_bits(std::uint64_t v, int nbits) {
  for (int i = nbits - 1; i >= 0; --i) put_bit(static_cast<int>((v >> i) & 1));
}

std::vector<std::uint8_t> BitWriter::finish() { return std::move(bytes_); }

int BitReader::get_bit() {
  if (pos_ >= size_ * 8) {
    ++pos_;
    return 0;
  }
  int b = (data_[pos_ / 8] >> (7 - pos_ % 8)) & 1;
  ++pos_;
  return b;
}

std::uint64_t BitReader::get_bits(int nbits) {
  std::uint64_t v = 0;
  for (int i = 0; i < nbits; ++i) v = (v << 1) | static_cast<std::uint64_t>(get_bit());
  return v;
}

QuantizedPmf QuantizedPmf::from_pmf(const FinitePmf& p) {
  const std::size_t M = p.alphabet_size();
  std::vector<std::uint32_t> freq(M, 0);
  std::vector<double> raw(M, 0.0);
  std::uint32_t assigned = 0;
  for (std::size_t x = 0; x < M; ++x) {
    raw[x] = p.prob(x) * kScale;
    if (p.prob(x) > 0.0) {
      freq[x] = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(raw[x]));
      assigned += freq[x];
    }
  }
  // Largest-remainder correction toward an exact total, deterministic with
  // ties resolved by symbol order.
  while (assigned < kScale) {
    std::size_t best = M;
    double best_rem = -1.0;
    for (std::size_t x = 0; x < M; ++x) {
      if (p.prob(x) <= 0.0) continue;
      double rem = raw[x] - freq[x];
      if (rem > best_rem + 1e-15) {
        best_rem = rem;
        best = x;
      }
    }
    if (best == M) break;
    ++freq[best];
    ++assigned;
  }
  while (assigned > kScale) {
    std::size_t best = M;
    double best_excess = -kPosInf;
    for (std::size_t x = 0; x < M; ++x) {
      if (freq[x] <= 1) continue;
      double excess = freq[x] - raw[x];
      if (excess > best_excess + 1e-15) {
        best_excess = excess;
        best = x;
      }
    }
    if (best == M) throw capacity_error("QuantizedPmf: alphabet too large for 16-bit scale");
    --freq[best];
    --assigned;
  }
  QuantizedPmf q;
  q.cum.resize(M + 1, 0);
  for (std::size_t x = 0; x < M; ++x) q.cum[x + 1] = q.cum[x] + freq[x];
  if (q.cum[M] != kScale) throw numeric_error("QuantizedPmf: frequency total mismatch");
  return q;
}

void ArithmeticEncoder::emit(int bit) {
  w_.put_bit(bit);
  for (; pending_ > 0; --pending_) w_.put_bit(!bit);
}

void ArithmeticEncoder::encode(std::size_t symbol, const QuantizedPmf& q) {
  std::uint32_t f_lo = q.cum[symbol], f_hi = q.cum[symbol + 1];
  if (f_lo == f_hi) throw capacity_error("ArithmeticEncoder: symbol has zero coding frequency");
  std::uint64_t range = hi_ - lo_ + 1;
  hi_ = lo_ + (range * f_hi) / kScale - 1;
  lo_ = lo_ + (range * f_lo) / kScale;
  for (;;) {
    if (hi_ < kHalf) {
      emit(0);
    } else if (lo_ >= kHalf) {
      emit(1);
      lo_ -= kHalf;
      hi_ -= kHalf;
    } else if (lo_ >= kQuarter && hi_ < kThreeQuarter) {
      ++pending_;
      lo_ -= kQuarter;
      hi_ -= kQuarter;
    } else {
      break;
    }
    lo_ <<= 1;
    hi_ = (hi_ << 1) | 1;
  }
}

void ArithmeticEncoder::finish() {
  ++pending_;
  emit(lo_ >= kQuarter ? 1 : 0);
}

ArithmeticDecoder::ArithmeticDecoder(BitReader& r) : r_(r) { value_ = r_.get_bits(32); }

std::size_t ArithmeticDecoder::decode(const QuantizedPmf& q) {
  std::uint64_t range = hi_ - lo_ + 1;
  std::uint64_t scaled = ((value_ - lo_ + 1) * kScale - 1) / range;
  std::size_t symbol = 0;
  while (symbol + 1 < q.cum.size() - 1 && q.cum[symbol + 1] <= scaled) ++symbol;
  std::uint32_t f_lo = q.cum[symbol], f_hi = q.cum[symbol + 1];
  hi_ = lo_ + (range * f_hi) / kScale - 1;
  lo_ = lo_ + (range * f_lo) / kScale;
  for (;;) {
    if (hi_ < kHalf) {
      // nothing
    } else if (lo_ >= kHalf) {
      lo_ -= kHalf;
      hi_ -= kHalf;
      value_ -= kHalf;
    } else if (lo_ >= kQuarter && hi_ < kThreeQuarter) {
      lo_ -= kQuarter;
      hi_ -= kQuarter;
      value_ -= kQuarter;
    } else {
      break;
    }
    lo_ <<= 1;
    hi_ = (hi_ << 1) | 1;
    value_ = ((value_ << 1) | static_cast<std::uint64_t>(r_.get_bit())) & kMask;
  }
  return symbol;
}

std::vector<std::uint8_t> compress_sequence(const Codec& codec,
                                            const std::vector<std::size_t>& symbols) {
  const std::size_t M = codec.family().alphabet_size();
  if (symbols.size() != codec.sample_size()) {
    throw domain_error("compress_sequence: sequence length does not match the code context");
  }
  if (symbols.size() > 0xFFFFFFFFull) throw capacity_error("compress_sequence: sequence too long");
  std::vector<std::uint64_t> counts(M, 0);
  for (std::size_t s : symbols) {
    if (s >= M) throw domain_error("compress_sequence: symbol out of range");
    ++counts[s];
  }
  Codec::Encoding enc = codec.encode(counts);

  BitWriter w;
  w.put_bit(enc.route == Route::kBoundary ? 1 : 0);
  if (enc.route == Route::kInterior) {
    w.put_bits(enc.point_index, bits_for(codec.grid().size()));
    if (codec.bundle_on()) {
      if (enc.tilt_index == 0) {
        w.put_bit(0);
      } else {
        w.put_bit(1);
        w.put_bits(enc.tilt_index - 1, bits_for(codec.tilt_set()->size() - 1));
      }
    }
  } else {
    w.put_bits(enc.descriptor_index, bits_for(codec.family().descriptor_states()));
    const auto& face = codec.face_code(enc.descriptor_index);
    if (face.codec) {
      w.put_bits(enc.sub_point_index, bits_for(face.codec->grid().size()));
    }
  }

  QuantizedPmf q = QuantizedPmf::from_pmf(enc.payload);
  ArithmeticEncoder ac(w);
  for (std::size_t s : symbols) ac.encode(s, q);
  ac.finish();

  std::vector<std::uint8_t> body = w.finish();
  std::vector<std::uint8_t> out;
  out.reserve(body.size() + 6);
  out.push_back(kMagic);
  out.push_back(kVersion);
  std::uint32_t n = static_cast<std::uint32_t>(symbols.size());
  out.push_back(static_cast<std::uint8_t>(n >> 24));
  out.push_back(static_cast<std::uint8_t>(n >> 16));
  out.push_back(static_cast<std::uint8_t>(n >> 8));
  out.push_back(static_cast<std::uint8_t>(n));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

std::uint64_t peek_sequence_length(const std::vector<std::uint8_t>& stream) {
  if (stream.size() < 6 || stream[0] != kMagic) {
    throw domain_error("stream envelope: bad magic");
  }
  if (stream[1] != kVersion) throw domain_error("stream envelope: unsupported version");
  return (std::uint64_t{stream[2]} << 24) | (std::uint64_t{stream[3]} << 16) |
         (std::uint64_t{stream[4]} << 8) | std::uint64_t{stream[5]};
}

std::vector<std::size_t> decompress_sequence(const Codec& codec,
                                             const std::vector<std::uint8_t>& stream) {
  std::uint64_t n = peek_sequence_length(stream);
  if (n != codec.sample_size()) {
    throw domain_error("decompress_sequence: stream length does not match the code context");
  }
  BitReader r(stream.data() + 6, stream.size() - 6);
  int boundary = r.get_bit();
  std::optional<FinitePmf> payload;
  if (!boundary) {
    std::size_t point = r.get_bits(bits_for(codec.grid().size()));
    if (point >= codec.grid().size()) throw domain_error("decompress_sequence: bad point index");
    std::size_t tilt = 0;
    if (codec.bundle_on()) {
      if (r.get_bit()) {
        tilt = 1 + r.get_bits(bits_for(codec.tilt_set()->size() - 1));
        if (tilt >= codec.tilt_set()->size()) {
          throw domain_error("decompress_sequence: bad tilt index");
        }
      }
    }
    payload = codec.interior_payload(point, tilt);
  } else {
    std::uint64_t descriptor = r.get_bits(bits_for(codec.family().descriptor_states()));
    const auto& face = codec.face_code(descriptor);
    if (face.codec) {
      std::size_t sub_point = r.get_bits(bits_for(face.codec->grid().size()));
      if (sub_point >= face.codec->grid().size()) {
        throw domain_error("decompress_sequence: bad face point index");
      }
      payload = face.codec->interior_payload(sub_point, 0);
    } else {
      payload = face.decomp.sub->pmf(Vec());
    }
  }

  QuantizedPmf q = QuantizedPmf::from_pmf(*payload);
  ArithmeticDecoder ac(r);
  std::vector<std::size_t> symbols(n);
  for (std::uint64_t i = 0; i < n; ++i) symbols[i] = ac.decode(q);
  return symbols;
}

StreamAccounting account_stream(const Codec& codec, const std::vector<std::size_t>& symbols) {
  std::vector<std::uint64_t> counts(codec.family().alphabet_size(), 0);
  for (std::size_t s : symbols) ++counts[s];
  Codec::Encoding enc = codec.encode(counts);
  StreamAccounting acc;
  double model_nats = std::log(2.0);  // route bit
  if (enc.route == Route::kInterior) {
    model_nats += codec.grid().log_size();
    if (codec.bundle_on()) model_nats += enc.tilt_index == 0 ? codec.l2() : codec.l2_bar();
  } else {
    model_nats += std::log(static_cast<double>(codec.family().descriptor_states()));
    const auto& face = codec.face_code(enc.descriptor_index);
    if (face.codec) model_nats += face.codec->grid().log_size();
  }
  acc.ideal_nats = enc.data_nats + model_nats;
  auto stream = compress_sequence(codec, symbols);
  acc.stream_bits = (stream.size() - 6) * 8;
  acc.overhead_bits = static_cast<double>(acc.stream_bits) - acc.ideal_nats / std::log(2.0);
  return acc;
}

}  // namespace mdl
