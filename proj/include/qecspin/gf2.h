// Copyright 2026 The qecspin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QECSPIN_GF2_H
#define QECSPIN_GF2_H

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qecspin {

/// Bit vector over GF(2), packed into 64-bit words. Bits past size() are kept zero.
class BinaryVector {
   public:
    BinaryVector() = default;
    explicit BinaryVector(size_t size);

    /// Parses a string of '0'/'1' characters, index 0 first.
    static BinaryVector from_string(std::string_view bits);
    /// Hex packing: digit j holds bits 4j..4j+3, bit 4j in the least significant position.
    static BinaryVector from_hex(std::string_view hex, size_t size);
    static BinaryVector unit(size_t size, size_t index);

    size_t size() const { return size_; }
    size_t num_words() const { return words_.size(); }
    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool value);
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }
    void clear();

    size_t weight() const;
    bool is_zero() const;
    /// Parity of the bitwise AND.
    bool dot(const BinaryVector &other) const;
    /// Index of the lowest set bit, or size() when zero.
    size_t first_one() const;

    BinaryVector &operator^=(const BinaryVector &other);
    BinaryVector operator^(const BinaryVector &other) const;
    BinaryVector operator&(const BinaryVector &other) const;

    /// Copy of bits [start, start + len).
    BinaryVector slice(size_t start, size_t len) const;
    BinaryVector concat(const BinaryVector &other) const;

    std::span<const uint64_t> words() const { return words_; }
    std::span<uint64_t> words() { return words_; }

    std::string str() const;
    std::string to_hex() const;

    bool operator==(const BinaryVector &other) const = default;
    /// Lexicographic on bit index 0, 1, 2, ... ; a 0 beats a 1 at the first difference.
    std::strong_ordering operator<=>(const BinaryVector &other) const;

   private:
    size_t size_ = 0;
    std::vector<uint64_t> words_;
};

/// Dense row-major matrix over GF(2). Each row is a BinaryVector.
class BinaryMatrix {
   public:
    BinaryMatrix() = default;
    BinaryMatrix(size_t rows, size_t cols);

    static BinaryMatrix identity(size_t n);
    static BinaryMatrix from_rows(const std::vector<BinaryVector> &rows, size_t cols);
    static BinaryMatrix from_strings(const std::vector<std::string> &rows);

    size_t rows() const { return rows_.size(); }
    size_t cols() const { return cols_; }
    bool empty() const { return rows_.empty(); }

    bool get(size_t r, size_t c) const { return rows_[r].get(c); }
    void set(size_t r, size_t c, bool value) { rows_[r].set(c, value); }
    const BinaryVector &row(size_t r) const { return rows_[r]; }
    BinaryVector &row(size_t r) { return rows_[r]; }
    const std::vector<BinaryVector> &row_list() const { return rows_; }
    void append_row(const BinaryVector &row);
    BinaryVector column(size_t c) const;

    BinaryMatrix transpose() const;
    BinaryMatrix operator*(const BinaryMatrix &other) const;
    /// M xᵀ.
    BinaryVector apply(const BinaryVector &x) const;
    /// x M  (combination of rows selected by x).
    BinaryVector combine_rows(const BinaryVector &x) const;
    BinaryMatrix select_columns(const std::vector<size_t> &cols) const;
    size_t rank() const;
    bool is_zero() const;

    std::vector<std::string> str_rows() const;
    bool operator==(const BinaryMatrix &other) const = default;

   private:
    size_t cols_ = 0;
    std::vector<BinaryVector> rows_;
};

BinaryMatrix hstack(const BinaryMatrix &a, const BinaryMatrix &b);
BinaryMatrix vstack(const BinaryMatrix &a, const BinaryMatrix &b);

struct RrefResult {
    BinaryMatrix reduced;
    size_t rank = 0;
    std::vector<size_t> pivots;
};

RrefResult rref(const BinaryMatrix &m);
size_t rank(const BinaryMatrix &m);

/// Basis of {x : M xᵀ = 0}, one row per free column.
BinaryMatrix nullspace(const BinaryMatrix &m);
/// M* with M (M*)ᵀ = 0 and rank M + rank M* = cols. Rows independent.
BinaryMatrix exact_dual(const BinaryMatrix &m);

/// u1·v2 + v1·u2 for e = (v|u).
bool trace_inner(const BinaryVector &e1, const BinaryVector &e2);
BinaryVector conjugate(const BinaryVector &e);
BinaryMatrix conjugate(const BinaryMatrix &g);

/// Some x with M xᵀ = s, or nullopt when inconsistent.
std::optional<BinaryVector> solve(const BinaryMatrix &m, const BinaryVector &s);

/// n×n matrix whose row i is poly shifted cyclically by i. poly[j] is the coefficient of x^j.
BinaryMatrix circulant(const std::vector<int> &poly, size_t n);
BinaryMatrix circulant(std::string_view poly_bits, size_t n);
BinaryMatrix kron(const BinaryMatrix &a, const BinaryMatrix &b);

/// Echelon basis with pivot bookkeeping. Each stored row carries a tag recording
/// which inserted vectors it is built from.
class EchelonBasis {
   public:
    EchelonBasis(size_t width, size_t tag_width);

    /// Inserts v (tagged) and returns false when v is already in the span.
    bool insert(const BinaryVector &v, const BinaryVector &tag);
    bool insert(const BinaryVector &v);
    /// Reduces v against the basis; returns the residual and xors the used tags into tag_out.
    BinaryVector reduce(const BinaryVector &v, BinaryVector *tag_out = nullptr) const;
    bool contains(const BinaryVector &v) const { return reduce(v).is_zero(); }

    size_t rank() const { return rows_.size(); }
    size_t width() const { return width_; }
    const std::vector<BinaryVector> &rows() const { return rows_; }
    const std::vector<size_t> &pivots() const { return pivots_; }

   private:
    size_t width_;
    size_t tag_width_;
    std::vector<BinaryVector> rows_;
    std::vector<BinaryVector> tags_;
    std::vector<size_t> pivots_;
};

struct CosetWeight {
    size_t weight = 0;
    bool exact = true;
    BinaryVector argmin;
};

struct CosetSearchOptions {
    /// Exhaustive Gray-code walk when rank ≤ this many bits.
    size_t exhaustive_log2 = 24;
    /// Information-set rounds otherwise.
    size_t random_iterations = 400;
    uint64_t seed = 0x5eed;
    /// Stop early once a member of weight ≤ cap turns up.
    std::optional<size_t> cap;
};

/// min over x in rowspace(g) of wgt(v + x); ties go to the lexicographically smallest member.
CosetWeight coset_min_weight(const BinaryVector &v, const BinaryMatrix &g, const CosetSearchOptions &options = {});

}  // namespace qecspin

#endif
