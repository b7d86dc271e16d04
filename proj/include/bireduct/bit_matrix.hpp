#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bireduct/error.hpp"

namespace bireduct {

// Fixed-length vector over GF(2), packed 64 bits per word. Bits past size()
// in the last word are kept at zero so word-wise equality and popcount work.
class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false)
      : size_(size), words_((size + kWordBits - 1) / kWordBits, value ? ~Word{0} : Word{0}) {
    trim();
  }

  static BitVector from_indices(std::size_t size, std::span<const std::size_t> indices) {
    BitVector v(size);
    for (std::size_t i : indices) v.set(i);
    return v;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool test(std::size_t i) const {
    check(i);
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  bool operator[](std::size_t i) const { return test(i); }

  void set(std::size_t i, bool value = true) {
    check(i);
    const Word mask = Word{1} << (i % kWordBits);
    if (value)
      words_[i / kWordBits] |= mask;
    else
      words_[i / kWordBits] &= ~mask;
  }
  void reset(std::size_t i) { set(i, false); }
  void flip(std::size_t i) {
    check(i);
    words_[i / kWordBits] ^= Word{1} << (i % kWordBits);
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool none() const noexcept {
    for (Word w : words_)
      if (w) return false;
    return true;
  }
  bool any() const noexcept { return !none(); }
  bool all() const noexcept { return count() == size_; }

  BitVector& operator^=(const BitVector& o) {
    same_size(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
  }
  BitVector& operator&=(const BitVector& o) {
    same_size(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    return *this;
  }
  BitVector& operator|=(const BitVector& o) {
    same_size(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }

  BitVector operator~() const {
    BitVector r = *this;
    for (Word& w : r.words_) w = ~w;
    r.trim();
    return r;
  }

  // this &= ~o
  BitVector& and_not(const BitVector& o) {
    same_size(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~o.words_[w];
    return *this;
  }

  // Index of the lowest set bit at or after `from`, or size() if none.
  std::size_t next_set(std::size_t from) const noexcept {
    if (from >= size_) return size_;
    std::size_t w = from / kWordBits;
    Word cur = words_[w] & (~Word{0} << (from % kWordBits));
    while (true) {
      if (cur) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(cur));
      if (++w == words_.size()) return size_;
      cur = words_[w];
    }
  }
  std::size_t first_set() const noexcept { return next_set(0); }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = first_set(); i < size_; i = next_set(i + 1)) out.push_back(i);
    return out;
  }

  std::span<const Word> words() const noexcept { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  void check(std::size_t i) const {
    if (i >= size_) throw Error(ErrorKind::OutOfRange, "bit index " + std::to_string(i) + " >= " + std::to_string(size_));
  }
  void same_size(const BitVector& o) const {
    if (o.size_ != size_) throw Error(ErrorKind::DimensionMismatch, "bit vector lengths differ");
  }
  void trim() noexcept {
    if (size_ % kWordBits != 0 && !words_.empty()) words_.back() &= (Word{1} << (size_ % kWordBits)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<Word> words_;
};

// Dense matrix over GF(2), stored row-major as one BitVector per row.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols, bool value = false)
      : rows_(rows), cols_(cols), data_(rows, BitVector(cols, value)) {}

  // Builds from nested 0/1 rows; every row must have the same length.
  static BitMatrix from_rows(const std::vector<std::vector<int>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    BitMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw Error(ErrorKind::DimensionMismatch, "ragged row " + std::to_string(r));
      for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c] != 0);
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return row(r).test(c); }
  bool operator()(std::size_t r, std::size_t c) const { return get(r, c); }
  void set(std::size_t r, std::size_t c, bool value = true) { mutable_row(r).set(c, value); }
  void flip(std::size_t r, std::size_t c) { mutable_row(r).flip(c); }

  const BitVector& row(std::size_t r) const {
    if (r >= rows_) throw Error(ErrorKind::OutOfRange, "row " + std::to_string(r) + " >= " + std::to_string(rows_));
    return data_[r];
  }
  BitVector& mutable_row(std::size_t r) {
    if (r >= rows_) throw Error(ErrorKind::OutOfRange, "row " + std::to_string(r) + " >= " + std::to_string(rows_));
    return data_[r];
  }

  BitVector column(std::size_t c) const {
    BitVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.set(r, data_[r].test(c));
    return v;
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (const auto& r : data_) n += r.count();
    return n;
  }
  bool all_zero() const noexcept {
    for (const auto& r : data_)
      if (r.any()) return false;
    return true;
  }
  bool all_one() const noexcept {
    for (const auto& r : data_)
      if (!r.all()) return false;
    return true;
  }

  BitMatrix transposed() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = data_[r].first_set(); c < cols_; c = data_[r].next_set(c + 1)) t.set(c, r);
    return t;
  }

  BitMatrix complemented() const {
    BitMatrix m = *this;
    for (auto& r : m.data_) r = ~r;
    return m;
  }

  // Rows and columns are taken in the order given.
  BitMatrix submatrix(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const {
    BitMatrix m(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
      const BitVector& src = row(row_idx[i]);
      for (std::size_t j = 0; j < col_idx.size(); ++j) m.set(i, j, src.test(col_idx[j]));
    }
    return m;
  }

  BitMatrix& operator^=(const BitMatrix& o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw Error(ErrorKind::DimensionMismatch, "matrix shapes differ");
    for (std::size_t r = 0; r < rows_; ++r) data_[r] ^= o.data_[r];
    return *this;
  }
  friend BitMatrix operator^(BitMatrix a, const BitMatrix& b) { return a ^= b; }

  std::vector<std::vector<int>> to_rows() const {
    std::vector<std::vector<int>> out(rows_, std::vector<int>(cols_));
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out[r][c] = get(r, c) ? 1 : 0;
    return out;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BitVector> data_;
};

}  // namespace bireduct
