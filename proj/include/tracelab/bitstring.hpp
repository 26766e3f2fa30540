#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tracelab {

/// A binary string over {0,1}. The textual form is ASCII '0'/'1'.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits);

  static BitString from_ascii(std::string_view text);
  static BitString zeros(std::size_t n);
  /// Bits of `value`, most significant first, padded to `n` characters.
  static BitString from_integer(std::uint64_t value, std::size_t n);

  [[nodiscard]] std::string to_ascii() const;

  [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
  [[nodiscard]] bool empty() const noexcept { return bits_.empty(); }
  [[nodiscard]] std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
  [[nodiscard]] std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  [[nodiscard]] auto begin() const noexcept { return bits_.begin(); }
  [[nodiscard]] auto end() const noexcept { return bits_.end(); }

  [[nodiscard]] std::size_t count_ones() const noexcept;
  /// True when the window x[j .. j+w.size()-1] exists and equals w.
  [[nodiscard]] bool window_equals(std::size_t j, const BitString& w) const noexcept;
  [[nodiscard]] BitString slice(std::size_t start, std::size_t length) const;

  void push_back(std::uint8_t bit);

  friend BitString operator+(const BitString& a, const BitString& b);
  friend bool operator==(const BitString&, const BitString&) = default;
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept {
    return a.bits_ <=> b.bits_;
  }

 private:
  std::vector<std::uint8_t> bits_;
};

/// e_j of length k: a single 1 at index j-1 (1-based j).
BitString unit_kmer(std::size_t k, std::size_t j);

}  // namespace tracelab
