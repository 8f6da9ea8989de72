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

#include "qecspin/gf2.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <stdexcept>

namespace qecspin {

namespace {

size_t words_for(size_t bits) {
    return (bits + 63) / 64;
}

}  // namespace

BinaryVector::BinaryVector(size_t size) : size_(size), words_(words_for(size), 0) {
}

BinaryVector BinaryVector::from_string(std::string_view bits) {
    BinaryVector v(bits.size());
    for (size_t i = 0; i < bits.size(); i++) {
        if (bits[i] == '1') {
            v.set(i, true);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("bit string may only contain 0 and 1: " + std::string(bits));
        }
    }
    return v;
}

BinaryVector BinaryVector::from_hex(std::string_view hex, size_t size) {
    if (hex.size() != (size + 3) / 4) {
        throw std::invalid_argument("hex string has wrong length for " + std::to_string(size) + " bits");
    }
    BinaryVector v(size);
    for (size_t j = 0; j < hex.size(); j++) {
        char ch = hex[j];
        int digit;
        if (ch >= '0' && ch <= '9') {
            digit = ch - '0';
        } else if (ch >= 'a' && ch <= 'f') {
            digit = ch - 'a' + 10;
        } else if (ch >= 'A' && ch <= 'F') {
            digit = ch - 'A' + 10;
        } else {
            throw std::invalid_argument("bad hex digit");
        }
        for (size_t b = 0; b < 4; b++) {
            if ((digit >> b) & 1) {
                if (4 * j + b >= size) {
                    throw std::invalid_argument("hex string sets bits past the vector length");
                }
                v.set(4 * j + b, true);
            }
        }
    }
    return v;
}

BinaryVector BinaryVector::unit(size_t size, size_t index) {
    BinaryVector v(size);
    v.set(index, true);
    return v;
}

void BinaryVector::set(size_t i, bool value) {
    uint64_t mask = uint64_t{1} << (i & 63);
    if (value) {
        words_[i >> 6] |= mask;
    } else {
        words_[i >> 6] &= ~mask;
    }
}

void BinaryVector::clear() {
    std::fill(words_.begin(), words_.end(), 0);
}

size_t BinaryVector::weight() const {
    size_t w = 0;
    for (uint64_t word : words_) {
        w += std::popcount(word);
    }
    return w;
}

bool BinaryVector::is_zero() const {
    for (uint64_t word : words_) {
        if (word) {
            return false;
        }
    }
    return true;
}

bool BinaryVector::dot(const BinaryVector &other) const {
    if (other.size_ != size_) {
        throw std::invalid_argument("dot: length mismatch");
    }
    uint64_t acc = 0;
    for (size_t i = 0; i < words_.size(); i++) {
        acc ^= words_[i] & other.words_[i];
    }
    return std::popcount(acc) & 1;
}

size_t BinaryVector::first_one() const {
    for (size_t i = 0; i < words_.size(); i++) {
        if (words_[i]) {
            return i * 64 + std::countr_zero(words_[i]);
        }
    }
    return size_;
}

BinaryVector &BinaryVector::operator^=(const BinaryVector &other) {
    if (other.size_ != size_) {
        throw std::invalid_argument("xor: length mismatch");
    }
    for (size_t i = 0; i < words_.size(); i++) {
        words_[i] ^= other.words_[i];
    }
    return *this;
}

BinaryVector BinaryVector::operator^(const BinaryVector &other) const {
    BinaryVector r = *this;
    r ^= other;
    return r;
}

BinaryVector BinaryVector::operator&(const BinaryVector &other) const {
    if (other.size_ != size_) {
        throw std::invalid_argument("and: length mismatch");
    }
    BinaryVector r = *this;
    for (size_t i = 0; i < words_.size(); i++) {
        r.words_[i] &= other.words_[i];
    }
    return r;
}

BinaryVector BinaryVector::slice(size_t start, size_t len) const {
    if (start + len > size_) {
        throw std::out_of_range("slice past end of vector");
    }
    BinaryVector r(len);
    for (size_t i = 0; i < len; i++) {
        if (get(start + i)) {
            r.set(i, true);
        }
    }
    return r;
}

BinaryVector BinaryVector::concat(const BinaryVector &other) const {
    BinaryVector r(size_ + other.size_);
    std::copy(words_.begin(), words_.end(), r.words_.begin());
    for (size_t i = 0; i < other.size_; i++) {
        if (other.get(i)) {
            r.set(size_ + i, true);
        }
    }
    return r;
}

std::string BinaryVector::str() const {
    std::string s(size_, '0');
    for (size_t i = 0; i < size_; i++) {
        if (get(i)) {
            s[i] = '1';
        }
    }
    return s;
}

std::string BinaryVector::to_hex() const {
    static const char *digits = "0123456789abcdef";
    std::string s((size_ + 3) / 4, '0');
    for (size_t j = 0; j < s.size(); j++) {
        int d = 0;
        for (size_t b = 0; b < 4 && 4 * j + b < size_; b++) {
            d |= int(get(4 * j + b)) << b;
        }
        s[j] = digits[d];
    }
    return s;
}

std::strong_ordering BinaryVector::operator<=>(const BinaryVector &other) const {
    if (size_ != other.size_) {
        return size_ <=> other.size_;
    }
    for (size_t i = 0; i < words_.size(); i++) {
        uint64_t diff = words_[i] ^ other.words_[i];
        if (diff) {
            uint64_t low = diff & (~diff + 1);
            // whoever has the 0 at the first differing index comes first
            return (words_[i] & low) ? std::strong_ordering::greater : std::strong_ordering::less;
        }
    }
    return std::strong_ordering::equal;
}

BinaryMatrix::BinaryMatrix(size_t rows, size_t cols) : cols_(cols), rows_(rows, BinaryVector(cols)) {
}

BinaryMatrix BinaryMatrix::identity(size_t n) {
    BinaryMatrix m(n, n);
    for (size_t i = 0; i < n; i++) {
        m.set(i, i, true);
    }
    return m;
}

BinaryMatrix BinaryMatrix::from_rows(const std::vector<BinaryVector> &rows, size_t cols) {
    BinaryMatrix m(0, cols);
    for (const auto &r : rows) {
        m.append_row(r);
    }
    return m;
}

BinaryMatrix BinaryMatrix::from_strings(const std::vector<std::string> &rows) {
    if (rows.empty()) {
        return BinaryMatrix();
    }
    BinaryMatrix m(0, rows[0].size());
    for (const auto &r : rows) {
        m.append_row(BinaryVector::from_string(r));
    }
    return m;
}

void BinaryMatrix::append_row(const BinaryVector &row) {
    if (row.size() != cols_) {
        throw std::invalid_argument(
            "row has " + std::to_string(row.size()) + " bits, matrix has " + std::to_string(cols_) + " columns");
    }
    rows_.push_back(row);
}

BinaryVector BinaryMatrix::column(size_t c) const {
    BinaryVector v(rows());
    for (size_t r = 0; r < rows(); r++) {
        if (get(r, c)) {
            v.set(r, true);
        }
    }
    return v;
}

BinaryMatrix BinaryMatrix::transpose() const {
    BinaryMatrix t(cols_, rows());
    for (size_t r = 0; r < rows(); r++) {
        const auto &row = rows_[r];
        for (size_t c = row.first_one(); c < cols_; c++) {
            if (row.get(c)) {
                t.set(c, r, true);
            }
        }
    }
    return t;
}

BinaryMatrix BinaryMatrix::operator*(const BinaryMatrix &other) const {
    if (cols_ != other.rows()) {
        throw std::invalid_argument("matrix product: inner dimensions differ");
    }
    BinaryMatrix p(rows(), other.cols());
    for (size_t r = 0; r < rows(); r++) {
        for (size_t k = 0; k < cols_; k++) {
            if (get(r, k)) {
                p.rows_[r] ^= other.rows_[k];
            }
        }
    }
    return p;
}

BinaryVector BinaryMatrix::apply(const BinaryVector &x) const {
    if (x.size() != cols_) {
        throw std::invalid_argument("apply: vector length differs from column count");
    }
    BinaryVector s(rows());
    for (size_t r = 0; r < rows(); r++) {
        if (rows_[r].dot(x)) {
            s.set(r, true);
        }
    }
    return s;
}

BinaryVector BinaryMatrix::combine_rows(const BinaryVector &x) const {
    if (x.size() != rows()) {
        throw std::invalid_argument("combine_rows: vector length differs from row count");
    }
    BinaryVector out(cols_);
    for (size_t r = 0; r < rows(); r++) {
        if (x.get(r)) {
            out ^= rows_[r];
        }
    }
    return out;
}

BinaryMatrix BinaryMatrix::select_columns(const std::vector<size_t> &cols) const {
    BinaryMatrix m(rows(), cols.size());
    for (size_t r = 0; r < rows(); r++) {
        for (size_t j = 0; j < cols.size(); j++) {
            if (get(r, cols[j])) {
                m.set(r, j, true);
            }
        }
    }
    return m;
}

size_t BinaryMatrix::rank() const {
    return qecspin::rank(*this);
}

bool BinaryMatrix::is_zero() const {
    for (const auto &r : rows_) {
        if (!r.is_zero()) {
            return false;
        }
    }
    return true;
}

std::vector<std::string> BinaryMatrix::str_rows() const {
    std::vector<std::string> out;
    for (const auto &r : rows_) {
        out.push_back(r.str());
    }
    return out;
}

BinaryMatrix hstack(const BinaryMatrix &a, const BinaryMatrix &b) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("hstack: row counts differ");
    }
    BinaryMatrix m(0, a.cols() + b.cols());
    for (size_t r = 0; r < a.rows(); r++) {
        m.append_row(a.row(r).concat(b.row(r)));
    }
    return m;
}

BinaryMatrix vstack(const BinaryMatrix &a, const BinaryMatrix &b) {
    if (a.cols() != b.cols()) {
        throw std::invalid_argument("vstack: column counts differ");
    }
    BinaryMatrix m = a;
    for (const auto &r : b.row_list()) {
        m.append_row(r);
    }
    return m;
}

RrefResult rref(const BinaryMatrix &m) {
    RrefResult out;
    out.reduced = m;
    auto &R = out.reduced;
    size_t next = 0;
    for (size_t c = 0; c < m.cols() && next < m.rows(); c++) {
        size_t pick = next;
        while (pick < m.rows() && !R.get(pick, c)) {
            pick++;
        }
        if (pick == m.rows()) {
            continue;
        }
        std::swap(R.row(pick), R.row(next));
        for (size_t r = 0; r < m.rows(); r++) {
            if (r != next && R.get(r, c)) {
                R.row(r) ^= R.row(next);
            }
        }
        out.pivots.push_back(c);
        next++;
    }
    out.rank = next;
    return out;
}

size_t rank(const BinaryMatrix &m) {
    EchelonBasis basis(m.cols(), 0);
    for (const auto &r : m.row_list()) {
        basis.insert(r);
    }
    return basis.rank();
}

BinaryMatrix nullspace(const BinaryMatrix &m) {
    auto [R, r, pivots] = rref(m);
    size_t n = m.cols();
    std::vector<bool> is_pivot(n, false);
    for (size_t p : pivots) {
        is_pivot[p] = true;
    }
    BinaryMatrix basis(0, n);
    for (size_t f = 0; f < n; f++) {
        if (is_pivot[f]) {
            continue;
        }
        BinaryVector x(n);
        x.set(f, true);
        for (size_t i = 0; i < r; i++) {
            if (R.get(i, f)) {
                x.set(pivots[i], true);
            }
        }
        basis.append_row(x);
    }
    return basis;
}

BinaryMatrix exact_dual(const BinaryMatrix &m) {
    if (m.cols() == 0) {
        throw std::invalid_argument("exact_dual: matrix has no columns");
    }
    return nullspace(m);
}

bool trace_inner(const BinaryVector &e1, const BinaryVector &e2) {
    if (e1.size() != e2.size()) {
        throw std::invalid_argument("trace_inner: length mismatch");
    }
    if (e1.size() % 2) {
        throw std::invalid_argument("trace_inner: odd length, expected (v|u) with 2n bits");
    }
    return e1.dot(conjugate(e2));
}

BinaryVector conjugate(const BinaryVector &e) {
    if (e.size() % 2) {
        throw std::invalid_argument("conjugate: odd length");
    }
    size_t n = e.size() / 2;
    return e.slice(n, n).concat(e.slice(0, n));
}

BinaryMatrix conjugate(const BinaryMatrix &g) {
    if (g.cols() % 2) {
        throw std::invalid_argument("conjugate: odd column count");
    }
    BinaryMatrix out(0, g.cols());
    for (const auto &r : g.row_list()) {
        out.append_row(conjugate(r));
    }
    return out;
}

std::optional<BinaryVector> solve(const BinaryMatrix &m, const BinaryVector &s) {
    if (s.size() != m.rows()) {
        throw std::invalid_argument("solve: right-hand side length differs from row count");
    }
    // x Mᵀ = sᵀ: s must be a combination of the columns of M.
    EchelonBasis cols(m.rows(), m.cols());
    BinaryMatrix t = m.transpose();
    for (size_t c = 0; c < m.cols(); c++) {
        cols.insert(t.row(c), BinaryVector::unit(m.cols(), c));
    }
    BinaryVector x(m.cols());
    if (!cols.reduce(s, &x).is_zero()) {
        return std::nullopt;
    }
    return x;
}

BinaryMatrix circulant(const std::vector<int> &poly, size_t n) {
    size_t degree = 0;
    bool any = false;
    for (size_t j = 0; j < poly.size(); j++) {
        if (poly[j] & 1) {
            degree = j;
            any = true;
        }
    }
    if (n == 0 || (any && degree >= n)) {
        throw std::invalid_argument(
            "circulant: polynomial degree " + std::to_string(degree) + " needs n > degree, got n=" + std::to_string(n));
    }
    BinaryMatrix m(n, n);
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < poly.size(); j++) {
            if (poly[j] & 1) {
                m.set(i, (i + j) % n, true);
            }
        }
    }
    return m;
}

BinaryMatrix circulant(std::string_view poly_bits, size_t n) {
    std::vector<int> poly;
    for (char ch : poly_bits) {
        if (ch != '0' && ch != '1') {
            throw std::invalid_argument("polynomial bit string may only contain 0 and 1");
        }
        poly.push_back(ch == '1');
    }
    return circulant(poly, n);
}

BinaryMatrix kron(const BinaryMatrix &a, const BinaryMatrix &b) {
    BinaryMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t i = 0; i < a.rows(); i++) {
        for (size_t j = 0; j < a.cols(); j++) {
            if (!a.get(i, j)) {
                continue;
            }
            for (size_t k = 0; k < b.rows(); k++) {
                for (size_t l = 0; l < b.cols(); l++) {
                    if (b.get(k, l)) {
                        m.set(i * b.rows() + k, j * b.cols() + l, true);
                    }
                }
            }
        }
    }
    return m;
}

EchelonBasis::EchelonBasis(size_t width, size_t tag_width) : width_(width), tag_width_(tag_width) {
}

bool EchelonBasis::insert(const BinaryVector &v, const BinaryVector &tag) {
    BinaryVector t = tag;
    BinaryVector r = reduce(v, &t);
    size_t p = r.first_one();
    if (p == width_) {
        return false;
    }
    // keep the basis fully reduced on pivot columns
    for (size_t i = 0; i < rows_.size(); i++) {
        if (rows_[i].get(p)) {
            rows_[i] ^= r;
            tags_[i] ^= t;
        }
    }
    rows_.push_back(std::move(r));
    tags_.push_back(std::move(t));
    pivots_.push_back(p);
    return true;
}

bool EchelonBasis::insert(const BinaryVector &v) {
    return insert(v, BinaryVector(tag_width_));
}

BinaryVector EchelonBasis::reduce(const BinaryVector &v, BinaryVector *tag_out) const {
    if (v.size() != width_) {
        throw std::invalid_argument("EchelonBasis: vector length differs from basis width");
    }
    BinaryVector r = v;
    for (size_t i = 0; i < rows_.size(); i++) {
        if (r.get(pivots_[i])) {
            r ^= rows_[i];
            if (tag_out) {
                *tag_out ^= tags_[i];
            }
        }
    }
    return r;
}

namespace {

std::vector<BinaryVector> span_basis(const BinaryMatrix &g) {
    EchelonBasis basis(g.cols(), 0);
    for (const auto &r : g.row_list()) {
        basis.insert(r);
    }
    return basis.rows();
}

void consider(const BinaryVector &candidate, CosetWeight &best) {
    size_t w = candidate.weight();
    if (w < best.weight || (w == best.weight && candidate < best.argmin)) {
        best.weight = w;
        best.argmin = candidate;
    }
}

}  // namespace

CosetWeight coset_min_weight(const BinaryVector &v, const BinaryMatrix &g, const CosetSearchOptions &options) {
    if (v.size() != g.cols()) {
        throw std::invalid_argument("coset_min_weight: vector length differs from column count");
    }
    std::vector<BinaryVector> basis = span_basis(g);
    CosetWeight best;
    best.weight = v.weight();
    best.argmin = v;
    best.exact = true;
    size_t r = basis.size();
    auto hit_cap = [&]() {
        return options.cap.has_value() && best.weight <= *options.cap;
    };

    if (r <= options.exhaustive_log2) {
        BinaryVector x = v;
        uint64_t total = uint64_t{1} << r;
        for (uint64_t i = 1; i < total; i++) {
            x ^= basis[std::countr_zero(i)];
            consider(x, best);
            if (best.weight == 0) {
                break;
            }
            if (hit_cap()) {
                best.exact = false;
                break;
            }
        }
        return best;
    }

    best.exact = best.weight == 0;
    if (best.exact) {
        return best;
    }
    // information sets: clear a random choice of pivot columns, then try single-row moves
    std::mt19937_64 rng(options.seed);
    size_t n = v.size();
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    BinaryMatrix gm = BinaryMatrix::from_rows(basis, n);
    for (size_t it = 0; it < options.random_iterations && !hit_cap(); it++) {
        std::shuffle(perm.begin(), perm.end(), rng);
        auto red = rref(gm.select_columns(perm));
        std::vector<BinaryVector> rows;
        for (size_t i = 0; i < red.rank; i++) {
            BinaryVector back(n);
            for (size_t j = 0; j < n; j++) {
                if (red.reduced.get(i, j)) {
                    back.set(perm[j], true);
                }
            }
            rows.push_back(std::move(back));
        }
        BinaryVector y = v;
        for (size_t i = 0; i < red.rank; i++) {
            if (y.get(perm[red.pivots[i]])) {
                y ^= rows[i];
            }
        }
        consider(y, best);
        for (const auto &row : rows) {
            consider(y ^ row, best);
        }
        if (best.weight == 0) {
            best.exact = true;
            break;
        }
    }
    return best;
}

}  // namespace qecspin
