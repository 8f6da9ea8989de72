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

#include "qecspin/codes.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace qecspin {

std::string sector_name(Sector s) {
    switch (s) {
        case Sector::kFull:
            return "full";
        case Sector::kX:
            return "X";
        case Sector::kZ:
            return "Z";
    }
    return "?";
}

Sector parse_sector(const std::string &name) {
    if (name == "full") {
        return Sector::kFull;
    }
    if (name == "X" || name == "x") {
        return Sector::kX;
    }
    if (name == "Z" || name == "z") {
        return Sector::kZ;
    }
    throw std::invalid_argument("unknown sector '" + name + "' (expected full, X or Z)");
}

StabilizerCode StabilizerCode::from_generators(BinaryMatrix g, std::string name) {
    if (g.cols() % 2) {
        throw std::invalid_argument("generator matrix needs an even number of columns (v|u)");
    }
    BinaryMatrix gt = conjugate(g);
    for (size_t i = 0; i < g.rows(); i++) {
        for (size_t j = i + 1; j < g.rows(); j++) {
            if (g.row(i).dot(gt.row(j))) {
                throw std::invalid_argument(
                    "generators " + std::to_string(i) + " and " + std::to_string(j) + " anticommute");
            }
        }
    }
    StabilizerCode code;
    code.n_ = g.cols() / 2;
    code.rank_ = qecspin::rank(g);
    code.k_ = code.n_ - code.rank_;
    code.g_ = std::move(g);
    code.name_ = std::move(name);
    return code;
}

StabilizerCode StabilizerCode::css(BinaryMatrix gx, BinaryMatrix gz, std::string name) {
    if (gx.cols() != gz.cols()) {
        throw std::invalid_argument("G_X and G_Z have different column counts");
    }
    size_t n = gx.cols();
    for (size_t i = 0; i < gx.rows(); i++) {
        for (size_t j = 0; j < gz.rows(); j++) {
            if (gx.row(i).dot(gz.row(j))) {
                throw std::invalid_argument(
                    "G_X row " + std::to_string(i) + " and G_Z row " + std::to_string(j) + " overlap oddly");
            }
        }
    }
    StabilizerCode code;
    code.n_ = n;
    code.css_ = true;
    BinaryVector zero(n);
    code.g_ = BinaryMatrix(0, 2 * n);
    for (const auto &r : gx.row_list()) {
        code.g_.append_row(r.concat(zero));
    }
    for (const auto &r : gz.row_list()) {
        code.g_.append_row(zero.concat(r));
    }
    code.rank_ = qecspin::rank(gx) + qecspin::rank(gz);
    if (code.rank_ > n) {
        throw std::invalid_argument("rank G_X + rank G_Z exceeds n");
    }
    code.k_ = n - code.rank_;
    code.gx_ = std::move(gx);
    code.gz_ = std::move(gz);
    code.name_ = std::move(name);
    return code;
}

const BinaryMatrix &StabilizerCode::gx() const {
    if (!css_) {
        throw std::logic_error("code has no CSS split");
    }
    return gx_;
}

const BinaryMatrix &StabilizerCode::gz() const {
    if (!css_) {
        throw std::logic_error("code has no CSS split");
    }
    return gz_;
}

StabilizerCode new_stabilizer(const BinaryMatrix &g) {
    return StabilizerCode::from_generators(g);
}

StabilizerCode new_css(const BinaryMatrix &gx, const BinaryMatrix &gz) {
    return StabilizerCode::css(gx, gz);
}

StabilizerCode hp_code(const BinaryMatrix &h1, const BinaryMatrix &h2) {
    if (h1.empty() || h2.empty()) {
        throw std::invalid_argument("hp_code: empty seed matrix");
    }
    size_t r1 = h1.rows(), n1 = h1.cols();
    size_t r2 = h2.rows(), n2 = h2.cols();
    BinaryMatrix gx = hstack(kron(BinaryMatrix::identity(r2), h1), kron(h2, BinaryMatrix::identity(r1)));
    BinaryMatrix gz =
        hstack(kron(h2.transpose(), BinaryMatrix::identity(n1)), kron(BinaryMatrix::identity(n2), h1.transpose()));
    auto code = StabilizerCode::css(std::move(gx), std::move(gz), "hp");
    code.metadata()["r1"] = std::to_string(r1);
    code.metadata()["n1"] = std::to_string(n1);
    code.metadata()["r2"] = std::to_string(r2);
    code.metadata()["n2"] = std::to_string(n2);
    return code;
}

StabilizerCode cyclic_hp(const std::string &h1, size_t n1, const std::string &h2, size_t n2) {
    auto code = hp_code(circulant(h1, n1), circulant(h2, n2));
    code.set_name("hp-cyclic");
    code.metadata()["h1"] = h1;
    code.metadata()["h2"] = h2;
    return code;
}

StabilizerCode toric_code(size_t L) {
    if (L < 2) {
        throw std::invalid_argument("toric code needs L >= 2");
    }
    auto code = cyclic_hp("11", L, "11", L);
    code.set_name("toric");
    code.metadata()["L"] = std::to_string(L);
    return code;
}

StabilizerCode debierre_turban(size_t n1, size_t n2, size_t l) {
    if (l < 2 || l > n2) {
        throw std::invalid_argument("debierre_turban: need 2 <= l <= n2");
    }
    auto code = cyclic_hp("11", n1, std::string(l, '1'), n2);
    code.set_name("debierre-turban");
    code.metadata()["l"] = std::to_string(l);
    return code;
}

StabilizerCode gauge_code(const StabilizerCode &inner, size_t L) {
    const BinaryMatrix &g = inner.generators();
    size_t ns = g.rows();
    size_t nb = g.cols();
    BinaryMatrix r = circulant("11", L);
    BinaryMatrix el = BinaryMatrix::identity(L);
    BinaryMatrix gx = hstack(kron(el, g), kron(r, BinaryMatrix::identity(ns)));
    BinaryMatrix top = hstack(kron(r.transpose(), BinaryMatrix::identity(nb)), kron(el, g.transpose()));
    BinaryMatrix bottom = hstack(kron(el, conjugate(g)), BinaryMatrix(L * ns, L * ns));
    auto code = StabilizerCode::css(std::move(gx), vstack(top, bottom), "gauge");
    code.metadata()["inner"] = inner.name();
    code.metadata()["L"] = std::to_string(L);
    return code;
}

BinaryMatrix gallager_ldpc(size_t h, size_t v, size_t n_c, uint64_t seed, GallagerLayout layout) {
    if (h == 0 || v == 0 || n_c == 0) {
        throw std::invalid_argument("gallager_ldpc: weights and length must be positive");
    }
    if (h >= v) {
        throw std::invalid_argument("gallager_ldpc: expected h < v");
    }
    size_t row_w = layout == GallagerLayout::kRowWeightH ? h : v;
    size_t col_w = layout == GallagerLayout::kRowWeightH ? v : h;
    if (n_c % row_w) {
        throw std::invalid_argument(
            "gallager_ldpc: infeasible degrees, row weight " + std::to_string(row_w) + " must divide n_c");
    }
    size_t rows = col_w * n_c / row_w;
    std::mt19937_64 rng(seed);
    auto distinct_columns = [&](const BinaryMatrix &m) {
        std::set<BinaryVector> cols;
        for (size_t c = 0; c < n_c; c++) {
            if (!cols.insert(m.column(c)).second) {
                return false;
            }
        }
        return true;
    };
    for (int attempt = 0; attempt < 10000; attempt++) {
        BinaryMatrix m(rows, n_c);
        if (layout == GallagerLayout::kRowWeightH) {
            // stacked copies of the band matrix, columns of each copy permuted
            size_t block = n_c / row_w;
            for (size_t copy = 0; copy < col_w; copy++) {
                std::vector<size_t> perm(n_c);
                std::iota(perm.begin(), perm.end(), 0);
                if (copy > 0) {
                    std::shuffle(perm.begin(), perm.end(), rng);
                }
                for (size_t b = 0; b < block; b++) {
                    for (size_t j = 0; j < row_w; j++) {
                        m.set(copy * block + b, perm[b * row_w + j], true);
                    }
                }
            }
        } else {
            // two blocks of n_c/v rows only give (n_c/v)^2 distinct columns, so match sockets instead
            std::vector<size_t> sockets;
            for (size_t r = 0; r < rows; r++) {
                sockets.insert(sockets.end(), row_w, r);
            }
            std::shuffle(sockets.begin(), sockets.end(), rng);
            bool repeated = false;
            for (size_t c = 0; c < n_c && !repeated; c++) {
                for (size_t j = 0; j < col_w; j++) {
                    size_t r = sockets[c * col_w + j];
                    repeated = repeated || m.get(r, c);
                    m.set(r, c, true);
                }
            }
            if (repeated) {
                continue;
            }
        }
        if (distinct_columns(m)) {
            return m;
        }
    }
    throw std::runtime_error("gallager_ldpc: could not avoid duplicate columns");
}

BinaryVector syndrome(const StabilizerCode &code, const BinaryVector &e) {
    if (e.size() != 2 * code.n()) {
        throw std::invalid_argument("syndrome: error vector must have 2n bits");
    }
    return conjugate(code.generators()).apply(e);
}

namespace {

// Independent vectors of `space` that are not in span(base), as matrix rows.
BinaryMatrix quotient_basis(const std::vector<BinaryVector> &base, const BinaryMatrix &space, size_t width) {
    EchelonBasis eb(width, 0);
    for (const auto &b : base) {
        eb.insert(b);
    }
    BinaryMatrix out(0, width);
    for (const auto &v : space.row_list()) {
        if (eb.insert(v)) {
            out.append_row(v);
        }
    }
    return out;
}

std::vector<BinaryVector> echelon_rows(const BinaryMatrix &m) {
    EchelonBasis eb(m.cols(), 0);
    for (const auto &r : m.row_list()) {
        eb.insert(r);
    }
    return eb.rows();
}

}  // namespace

CodeSector::CodeSector(const StabilizerCode &code, Sector sector) : sector_(sector) {
    switch (sector) {
        case Sector::kFull:
            theta_ = code.generators();
            check_ = conjugate(code.generators());
            break;
        case Sector::kX:
            theta_ = code.gx();
            check_ = code.gz();
            break;
        case Sector::kZ:
            theta_ = code.gz();
            check_ = code.gx();
            break;
    }
    size_t nb = theta_.cols();
    theta_basis_ = echelon_rows(theta_);
    auto check_basis = echelon_rows(check_);
    rank_check_ = check_basis.size();
    logicals_ = quotient_basis(theta_basis_, nullspace(check_), nb);
    BinaryMatrix dual = quotient_basis(check_basis, nullspace(theta_), nb);
    size_t k = logicals_.rows();
    if (dual.rows() != k) {
        throw std::logic_error("CodeSector: class and dual class counts differ");
    }
    // make the pairing the identity: dual'_j = Σ_t (P⁻¹)_{tj} dual_t with P_it = l_i · d_t
    BinaryMatrix pairing(k, k);
    for (size_t i = 0; i < k; i++) {
        for (size_t t = 0; t < k; t++) {
            pairing.set(i, t, logicals_.row(i).dot(dual.row(t)));
        }
    }
    dual_logicals_ = BinaryMatrix(0, nb);
    for (size_t j = 0; j < k; j++) {
        auto a = solve(pairing, BinaryVector::unit(k, j));
        if (!a) {
            throw std::logic_error("CodeSector: degenerate class pairing");
        }
        dual_logicals_.append_row(dual.transpose().apply(*a));
    }
}

std::optional<BinaryVector> CodeSector::error_for_syndrome(const BinaryVector &s) const {
    return solve(check_, s);
}

uint64_t CodeSector::class_of(const BinaryVector &x) const {
    if (num_logicals() > 63) {
        throw std::length_error("class labels need more than 63 bits");
    }
    uint64_t cls = 0;
    for (size_t j = 0; j < num_logicals(); j++) {
        if (x.dot(dual_logicals_.row(j))) {
            cls |= uint64_t{1} << j;
        }
    }
    return cls;
}

BinaryVector CodeSector::class_vector(uint64_t cls) const {
    BinaryVector x(num_bonds());
    for (size_t j = 0; j < num_logicals(); j++) {
        if ((cls >> j) & 1) {
            x ^= logicals_.row(j);
        }
    }
    return x;
}

CodewordClasses codeword_classes(const StabilizerCode &code, Sector sector, size_t max_log2_classes,
                                 const CosetSearchOptions &search) {
    CodeSector cs(code, sector);
    CodewordClasses out;
    out.sector = sector;
    out.basis = cs.logicals();
    size_t k = cs.num_logicals();
    if (k > max_log2_classes) {
        return out;
    }
    std::vector<BinaryVector> reps;
    BinaryMatrix theta = BinaryMatrix::from_rows(cs.theta_basis(), cs.num_bonds());
    for (uint64_t c = 0; c < (uint64_t{1} << k); c++) {
        auto cw = coset_min_weight(cs.class_vector(c), theta, search);
        reps.push_back(cw.argmin);
        out.min_weights.push_back(cw.weight);
        out.min_weight_exact.push_back(cw.exact);
    }
    out.representatives = std::move(reps);
    return out;
}

std::string CodeParams::str() const {
    std::string ds = d == kInfiniteDistance ? "inf" : std::to_string(d);
    return "[[" + std::to_string(n) + "," + std::to_string(k) + "," + ds + "]]" + (d_exact ? "" : " (d upper bound)");
}

namespace {

// Depth-first walk over supports of a fixed size. Each position offers one or more
// "letters" (a syndrome column plus its class contribution).
struct Letter {
    BinaryVector syndrome;
    uint64_t cls;
};

class LowWeightSearch {
   public:
    LowWeightSearch(std::vector<std::vector<Letter>> letters, size_t syndrome_len)
        : letters_(std::move(letters)), acc_(syndrome_len) {
    }

    bool any_of_weight(size_t w) {
        return dfs(0, w, 0);
    }

   private:
    bool dfs(size_t start, size_t remaining, uint64_t cls) {
        if (remaining == 0) {
            return cls != 0 && acc_.is_zero();
        }
        for (size_t pos = start; pos + remaining <= letters_.size(); pos++) {
            for (const auto &letter : letters_[pos]) {
                acc_ ^= letter.syndrome;
                bool hit = dfs(pos + 1, remaining - 1, cls ^ letter.cls);
                acc_ ^= letter.syndrome;
                if (hit) {
                    return true;
                }
            }
        }
        return false;
    }

    std::vector<std::vector<Letter>> letters_;
    BinaryVector acc_;
};

}  // namespace

CodeParams sector_distance(const StabilizerCode &code, Sector sector, size_t cap) {
    CodeParams params;
    params.n = code.n();
    params.k = code.k();
    params.rate = code.n() ? double(code.k()) / double(code.n()) : 0.0;
    CodeSector cs(code, sector);
    if (cs.num_logicals() == 0) {
        return params;
    }
    size_t nb = cs.num_bonds();
    BinaryMatrix check_t = cs.check().transpose();
    auto unit_letter = [&](size_t b) {
        return Letter{check_t.row(b), cs.class_of(BinaryVector::unit(nb, b))};
    };
    std::vector<std::vector<Letter>> letters;
    if (sector == Sector::kFull) {
        size_t n = code.n();
        for (size_t q = 0; q < n; q++) {
            Letter x = unit_letter(q);
            Letter z = unit_letter(n + q);
            Letter y{x.syndrome ^ z.syndrome, x.cls ^ z.cls};
            letters.push_back({x, z, y});
        }
    } else {
        for (size_t b = 0; b < nb; b++) {
            letters.push_back({unit_letter(b)});
        }
    }
    LowWeightSearch search(std::move(letters), cs.check().rows());
    for (size_t w = 1; w <= cap && w <= nb; w++) {
        if (search.any_of_weight(w)) {
            params.d = w;
            params.d_exact = true;
            return params;
        }
    }
    // nothing light enough: upper bound from class representatives
    BinaryMatrix theta = BinaryMatrix::from_rows(cs.theta_basis(), nb);
    size_t best = kInfiniteDistance;
    size_t k = cs.num_logicals();
    uint64_t limit = k <= 10 ? (uint64_t{1} << k) : uint64_t(k + 1);
    for (uint64_t i = 1; i < limit; i++) {
        uint64_t cls = k <= 10 ? i : (uint64_t{1} << (i - 1));
        CosetSearchOptions opts;
        opts.exhaustive_log2 = 20;
        auto cw = coset_min_weight(cs.class_vector(cls), theta, opts);
        size_t w = cw.weight;
        if (sector == Sector::kFull) {
            size_t n = code.n();
            w = 0;
            for (size_t q = 0; q < n; q++) {
                w += cw.argmin.get(q) || cw.argmin.get(n + q);
            }
        }
        best = std::min(best, w);
    }
    params.d = best;
    params.d_exact = false;
    return params;
}

CodeParams distance(const StabilizerCode &code, size_t cap) {
    if (!code.is_css()) {
        return sector_distance(code, Sector::kFull, cap);
    }
    CodeParams x = sector_distance(code, Sector::kX, cap);
    CodeParams z = sector_distance(code, Sector::kZ, cap);
    CodeParams out = x;
    if (z.d < x.d || (z.d == x.d && !z.d_exact)) {
        out.d = z.d;
        out.d_exact = z.d_exact;
    }
    // an exact smaller value in one sector settles it even if the other was only bounded
    if (x.d_exact && x.d <= z.d) {
        out.d = x.d;
        out.d_exact = true;
    }
    if (z.d_exact && z.d <= x.d) {
        out.d = z.d;
        out.d_exact = true;
    }
    return out;
}

}  // namespace qecspin
