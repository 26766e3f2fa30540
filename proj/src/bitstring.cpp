#include "tracelab/bitstring.hpp"

#include <algorithm>

#include "tracelab/error.hpp"

namespace tracelab {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_)
    if (b > 1) throw Error(ErrorCode::InvalidArgument, "bit values must be 0 or 1");
}

BitString BitString::from_ascii(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1')
      throw Error(ErrorCode::InvalidArgument, "not a binary string: '" + std::string(text) + "'");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  BitString s;
  s.bits_ = std::move(bits);
  return s;
}

BitString BitString::zeros(std::size_t n) {
  BitString s;
  s.bits_.assign(n, 0);
  return s;
}

BitString BitString::from_integer(std::uint64_t value, std::size_t n) {
  BitString s;
  s.bits_.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.bits_[n - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1U);
  return s;
}

std::string BitString::to_ascii() const {
  std::string out(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) out[i] = static_cast<char>('0' + bits_[i]);
  return out;
}

std::size_t BitString::count_ones() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BitString::window_equals(std::size_t j, const BitString& w) const noexcept {
  if (j + w.size() > bits_.size()) return false;
  return std::equal(w.bits_.begin(), w.bits_.end(), bits_.begin() + static_cast<std::ptrdiff_t>(j));
}

BitString BitString::slice(std::size_t start, std::size_t length) const {
  if (start + length > bits_.size()) throw Error(ErrorCode::IndexOutOfRange, "slice past end");
  BitString s;
  s.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(start),
                 bits_.begin() + static_cast<std::ptrdiff_t>(start + length));
  return s;
}

void BitString::push_back(std::uint8_t bit) {
  if (bit > 1) throw Error(ErrorCode::InvalidArgument, "bit values must be 0 or 1");
  bits_.push_back(bit);
}

BitString operator+(const BitString& a, const BitString& b) {
  BitString s = a;
  s.bits_.insert(s.bits_.end(), b.bits_.begin(), b.bits_.end());
  return s;
}

BitString unit_kmer(std::size_t k, std::size_t j) {
  if (j == 0 || j > k) throw Error(ErrorCode::InvalidArgument, "unit k-mer index out of range");
  BitString s = BitString::zeros(k);
  std::vector<std::uint8_t> bits(s.begin(), s.end());
  bits[j - 1] = 1;
  return BitString(std::move(bits));
}

}  // namespace tracelab
