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

#include "qecspin/wegner.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

namespace qecspin {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(1 + e^x) without overflow.
double softplus(double x) {
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// log(2 cosh K)
double log_2cosh(double k) {
    double a = std::abs(k);
    return a + std::log1p(std::exp(-2 * a));
}

// Per-bond normalized weights e^{±K}/(2 cosh K): satisfied bond (0) and flipped bond (1).
double log_w0(double k) {
    return -softplus(-2 * k);
}
double log_w1(double k) {
    return -softplus(2 * k);
}

// Streaming log-sum-exp, one for positive and one for negative terms.
class SignedLogSum {
   public:
    void add(double log_abs, int sign) {
        if (sign > 0) {
            push(pos_max_, pos_sum_, log_abs);
        } else if (sign < 0) {
            push(neg_max_, neg_sum_, log_abs);
        }
    }

    PartitionValue result() const {
        double lp = pos_sum_ > 0 ? pos_max_ + std::log(pos_sum_) : kNegInf;
        double ln = neg_sum_ > 0 ? neg_max_ + std::log(neg_sum_) : kNegInf;
        PartitionValue v;
        if (lp == ln) {
            return v;
        }
        double hi = std::max(lp, ln);
        double lo = std::min(lp, ln);
        v.log_abs = hi + std::log1p(-std::exp(lo - hi));
        v.sign = lp > ln ? 1 : -1;
        return v;
    }

   private:
    static void push(double &mx, double &sum, double x) {
        if (x == kNegInf) {
            return;
        }
        if (sum == 0) {
            mx = x;
            sum = 1;
        } else if (x > mx) {
            sum = sum * std::exp(mx - x) + 1;
            mx = x;
        } else {
            sum += std::exp(x - mx);
        }
    }

    double pos_max_ = kNegInf, pos_sum_ = 0;
    double neg_max_ = kNegInf, neg_sum_ = 0;
};

// Inner kernel: hist[wgt(x ^ table[t])] += sign(t) over the whole table. Four interleaved
// histograms keep consecutive increments of the same bin off one dependency chain.
template <size_t W>
struct TableKernel {
    static void run(const std::array<uint64_t, W> &x, const std::array<uint64_t, W> *table, const int8_t *signs,
                    size_t count, int64_t outer_sign, int64_t (*hist)[4]) {
        for (size_t t = 0; t < count; t++) {
            size_t w = 0;
            for (size_t k = 0; k < W; k++) {
                w += std::popcount(x[k] ^ table[t][k]);
            }
            hist[w][t & 3] += signs ? outer_sign * signs[t] : 1;
        }
    }
#if defined(__x86_64__) && defined(__GNUC__)
    __attribute__((target("popcnt"))) static void run_popcnt(const std::array<uint64_t, W> &x,
                                                             const std::array<uint64_t, W> *table,
                                                             const int8_t *signs, size_t count, int64_t outer_sign,
                                                             int64_t (*hist)[4]) {
        if (!signs) {
            for (size_t t = 0; t < count; t++) {
                size_t w = 0;
                for (size_t k = 0; k < W; k++) {
                    w += size_t(__builtin_popcountll(x[k] ^ table[t][k]));
                }
                hist[w][t & 3]++;
            }
            return;
        }
        for (size_t t = 0; t < count; t++) {
            size_t w = 0;
            for (size_t k = 0; k < W; k++) {
                w += size_t(__builtin_popcountll(x[k] ^ table[t][k]));
            }
            hist[w][t & 3] += outer_sign * signs[t];
        }
    }
#endif
};

bool have_popcnt() {
#if defined(__x86_64__) && defined(__GNUC__)
    static const bool ok = __builtin_cpu_supports("popcnt");
    return ok;
#else
    return false;
#endif
}

// Gray-code walk over span(rows) + offset; hist[wgt] += (−1)^{x·m} for the span part x.
// The lowest rows are tabulated so the hot loop is a table scan.
template <size_t W>
void walk_words(const std::vector<BinaryVector> &rows, const BinaryVector &offset, const BinaryVector *m,
                std::span<int64_t> hist) {
    size_t r = rows.size();
    std::vector<std::array<uint64_t, W>> packed(r);
    std::vector<uint8_t> flips(r, 0);
    for (size_t i = 0; i < r; i++) {
        for (size_t w = 0; w < W; w++) {
            packed[i][w] = rows[i].words()[w];
        }
        if (m) {
            flips[i] = rows[i].dot(*m);
        }
    }
    size_t low = std::min<size_t>(r, 10);
    size_t count = size_t{1} << low;
    std::vector<std::array<uint64_t, W>> table(count);
    std::vector<int8_t> signs(m ? count : 0);
    for (size_t t = 0; t < count; t++) {
        std::array<uint64_t, W> v{};
        int parity = 0;
        for (size_t j = 0; j < low; j++) {
            if ((t >> j) & 1) {
                for (size_t w = 0; w < W; w++) {
                    v[w] ^= packed[j][w];
                }
                parity ^= flips[j];
            }
        }
        table[t] = v;
        if (m) {
            signs[t] = parity ? -1 : 1;
        }
    }

    std::vector<int64_t> split(4 * hist.size(), 0);
    auto *h4 = reinterpret_cast<int64_t(*)[4]>(split.data());
    const int8_t *sp = m ? signs.data() : nullptr;
    auto kernel = have_popcnt() ? nullptr : &TableKernel<W>::run;
#if defined(__x86_64__) && defined(__GNUC__)
    if (!kernel) {
        kernel = &TableKernel<W>::run_popcnt;
    }
#endif

    std::array<uint64_t, W> x{};
    for (size_t w = 0; w < W; w++) {
        x[w] = offset.words()[w];
    }
    int64_t sign = 1;
    uint64_t outer = uint64_t{1} << (r - low);
    kernel(x, table.data(), sp, count, sign, h4);
    for (uint64_t i = 1; i < outer; i++) {
        size_t j = low + size_t(std::countr_zero(i));
        for (size_t w = 0; w < W; w++) {
            x[w] ^= packed[j][w];
        }
        if (flips[j]) {
            sign = -sign;
        }
        kernel(x, table.data(), sp, count, sign, h4);
    }
    for (size_t w = 0; w < hist.size(); w++) {
        hist[w] += split[4 * w] + split[4 * w + 1] + split[4 * w + 2] + split[4 * w + 3];
    }
}

void walk_generic(const std::vector<BinaryVector> &rows, const BinaryVector &offset, const BinaryVector *m,
                  std::span<int64_t> hist) {
    size_t r = rows.size();
    std::vector<uint8_t> flips(r, 0);
    for (size_t i = 0; i < r && m; i++) {
        flips[i] = rows[i].dot(*m);
    }
    BinaryVector x = offset;
    int64_t sign = 1;
    hist[x.weight()] += 1;
    uint64_t total = uint64_t{1} << r;
    for (uint64_t i = 1; i < total; i++) {
        size_t j = std::countr_zero(i);
        x ^= rows[j];
        if (flips[j]) {
            sign = -sign;
        }
        hist[x.weight()] += sign;
    }
}

void walk(const std::vector<BinaryVector> &rows, const BinaryVector &offset, const BinaryVector *m,
          std::span<int64_t> hist) {
    if (rows.size() >= 63) {
        throw BudgetExceeded("span walk over 2^" + std::to_string(rows.size()) + " elements");
    }
    switch (offset.num_words()) {
        case 1:
            return walk_words<1>(rows, offset, m, hist);
        case 2:
            return walk_words<2>(rows, offset, m, hist);
        case 3:
            return walk_words<3>(rows, offset, m, hist);
        case 4:
            return walk_words<4>(rows, offset, m, hist);
        default:
            return walk_generic(rows, offset, m, hist);
    }
}

// Σ_w A_w exp(w lw1 + (N − w) lw0 + shift)
PartitionValue sum_histogram(std::span<const int64_t> hist, double lw0, double lw1, double shift) {
    SignedLogSum acc;
    size_t nb = hist.size() - 1;
    for (size_t w = 0; w <= nb; w++) {
        if (hist[w] == 0) {
            continue;
        }
        double term = std::log(double(std::llabs(hist[w]))) + double(w) * lw1 + double(nb - w) * lw0 + shift;
        acc.add(term, hist[w] > 0 ? 1 : -1);
    }
    return acc.result();
}

void check_lengths(const WegnerModel &model, const DisorderConfig &d) {
    if (d.e.size() != model.num_bonds() || d.m.size() != model.num_bonds()) {
        throw std::invalid_argument("disorder vectors must have one bit per bond");
    }
}

std::vector<double> scaled(const WegnerModel &model, double beta) {
    std::vector<double> k = model.couplings();
    for (double &x : k) {
        x *= beta;
    }
    return k;
}

// Non-uniform couplings: walk the span keeping Σ_b log w_b(y_b) up to date.
PartitionValue walk_nonuniform(const std::vector<BinaryVector> &rows, const DisorderConfig &d,
                               const std::vector<double> &k, double shift) {
    size_t nb = d.e.size();
    std::vector<double> lw0(nb), lw1(nb);
    for (size_t b = 0; b < nb; b++) {
        lw0[b] = log_w0(k[b]);
        lw1[b] = log_w1(k[b]);
    }
    std::vector<std::vector<size_t>> support(rows.size());
    std::vector<uint8_t> flips(rows.size());
    for (size_t i = 0; i < rows.size(); i++) {
        for (size_t b = 0; b < nb; b++) {
            if (rows[i].get(b)) {
                support[i].push_back(b);
            }
        }
        flips[i] = rows[i].dot(d.m);
    }
    BinaryVector y = d.e;
    auto full = [&]() {
        double s = 0;
        for (size_t b = 0; b < nb; b++) {
            s += y.get(b) ? lw1[b] : lw0[b];
        }
        return s;
    };
    double logw = full();
    int sign = 1;
    SignedLogSum acc;
    acc.add(logw + shift, sign);
    uint64_t total = uint64_t{1} << rows.size();
    for (uint64_t i = 1; i < total; i++) {
        size_t j = std::countr_zero(i);
        for (size_t b : support[j]) {
            logw += y.get(b) ? lw0[b] - lw1[b] : lw1[b] - lw0[b];
            y.flip(b);
        }
        if ((i & 4095) == 0) {
            logw = full();
        }
        if (flips[j]) {
            sign = -sign;
        }
        acc.add(logw + shift, sign);
    }
    return acc.result();
}

}  // namespace

WegnerModel::WegnerModel(BinaryMatrix theta, std::vector<double> couplings)
    : theta_(std::move(theta)), couplings_(std::move(couplings)) {
    if (couplings_.empty()) {
        couplings_.assign(theta_.cols(), 1.0);
    }
    if (couplings_.size() != theta_.cols()) {
        throw std::invalid_argument("one coupling per bond expected");
    }
    for (double j : couplings_) {
        if (!(j >= 0) || !std::isfinite(j)) {
            throw std::invalid_argument("couplings must be finite and non-negative");
        }
        uniform_ = uniform_ && j == couplings_[0];
    }
    EchelonBasis eb(theta_.cols(), 0);
    for (const auto &r : theta_.row_list()) {
        eb.insert(r);
    }
    basis_ = eb.rows();
}

double PartitionValue::value() const {
    return sign == 0 ? 0.0 : sign * std::exp(log_abs);
}

PartitionValue PartitionValue::from_double(double v) {
    PartitionValue p;
    if (v != 0) {
        p.sign = v > 0 ? 1 : -1;
        p.log_abs = std::log(std::abs(v));
    }
    return p;
}

double log_ratio(const PartitionValue &num, const PartitionValue &den) {
    if (num.sign <= 0 || den.sign <= 0) {
        throw std::domain_error("log_ratio needs positive partition values");
    }
    return num.log_abs - den.log_abs;
}

PartitionValue eval_spin_enum(const WegnerModel &model, const DisorderConfig &d, double beta, size_t max_spins) {
    check_lengths(model, d);
    size_t ns = model.num_spins();
    if (ns > max_spins) {
        throw BudgetExceeded("eval_spin_enum: " + std::to_string(ns) + " spins exceed the budget of " +
                             std::to_string(max_spins) + "; use eval_coset_enum");
    }
    size_t nb = model.num_bonds();
    std::vector<double> k = scaled(model, beta);
    double norm = -double(model.degeneracy()) * kLn2;
    const auto &rows = model.theta().row_list();
    if (model.uniform() && nb > 0) {
        std::vector<int64_t> hist(nb + 1, 0);
        walk(rows, d.e, &d.m, hist);
        // term = exp(K (N − 2w)) / (2 cosh K)^N
        double kk = k[0];
        SignedLogSum acc;
        for (size_t w = 0; w <= nb; w++) {
            if (hist[w]) {
                double t = std::log(double(std::llabs(hist[w]))) + kk * (double(nb) - 2.0 * double(w)) -
                           double(nb) * log_2cosh(kk) + norm;
                acc.add(t, hist[w] > 0 ? 1 : -1);
            }
        }
        return acc.result();
    }
    // one full product per configuration
    BinaryVector y = d.e;
    SignedLogSum acc;
    int sign = 1;
    auto term = [&]() {
        double s = norm;
        for (size_t b = 0; b < nb; b++) {
            s += (y.get(b) ? -k[b] : k[b]) - log_2cosh(k[b]);
        }
        return s;
    };
    acc.add(term(), sign);
    uint64_t total = uint64_t{1} << ns;
    for (uint64_t i = 1; i < total; i++) {
        size_t j = std::countr_zero(i);
        y ^= rows[j];
        if (rows[j].dot(d.m)) {
            sign = -sign;
        }
        acc.add(term(), sign);
    }
    return acc.result();
}

PartitionValue eval_coset_enum(const WegnerModel &model, const BinaryVector &e, double beta, size_t max_rank) {
    return eval_coset_enum(model, DisorderConfig::electric(e), beta, max_rank);
}

PartitionValue eval_coset_enum(const WegnerModel &model, const DisorderConfig &d, double beta, size_t max_rank) {
    check_lengths(model, d);
    if (model.rank() > max_rank) {
        throw BudgetExceeded("eval_coset_enum: rank " + std::to_string(model.rank()) + " exceeds the budget of " +
                             std::to_string(max_rank));
    }
    size_t nb = model.num_bonds();
    std::vector<double> k = scaled(model, beta);
    if (nb == 0) {
        return PartitionValue::from_double(1.0);
    }
    if (model.uniform()) {
        std::vector<int64_t> hist(nb + 1, 0);
        walk(model.basis(), d.e, d.m.is_zero() ? nullptr : &d.m, hist);
        return sum_histogram(hist, log_w0(k[0]), log_w1(k[0]), 0.0);
    }
    return walk_nonuniform(model.basis(), d, k, 0.0);
}

double duality_log_factor(const WegnerModel &model, double beta) {
    double f = (double(model.rank()) - double(model.num_bonds())) * kLn2;
    for (double j : model.couplings()) {
        f += std::log1p(std::tanh(beta * j));
    }
    return f;
}

WegnerModel dual_model(const WegnerModel &model, double beta) {
    std::vector<double> dual(model.num_bonds());
    for (size_t b = 0; b < dual.size(); b++) {
        double k = beta * model.couplings()[b];
        if (!(k > 0)) {
            throw std::domain_error("dual coupling undefined for K_b = 0 (bond " + std::to_string(b) + ")");
        }
        // tanh K = e^{−2K*}  ⇔  K* = atanh(e^{−2K})
        dual[b] = std::atanh(std::exp(-2 * k));
    }
    return WegnerModel(exact_dual(model.theta()), std::move(dual));
}

PartitionValue evaluate(const WegnerModel &model, const DisorderConfig &d, double beta, const EnumBudget &budget) {
    check_lengths(model, d);
    size_t spin_cost = model.num_spins();
    size_t coset_cost = model.rank();
    size_t dual_cost = model.num_bonds() - model.rank();
    bool dual_ok = d.e.is_zero() && beta > 0 && dual_cost <= budget.max_rank;
    bool coset_ok = coset_cost <= budget.max_rank;
    bool spin_ok = spin_cost <= budget.max_spins;
    if (coset_ok && (!dual_ok || coset_cost <= dual_cost) && (!spin_ok || coset_cost <= spin_cost)) {
        return eval_coset_enum(model, d, beta, budget.max_rank);
    }
    if (dual_ok && (!spin_ok || dual_cost < spin_cost)) {
        WegnerModel dual = dual_model(model, beta);
        PartitionValue v = eval_coset_enum(dual, DisorderConfig{d.m, d.e}, 1.0, budget.max_rank);
        v.log_abs += duality_log_factor(model, beta);
        return v;
    }
    if (spin_ok) {
        return eval_spin_enum(model, d, beta, budget.max_spins);
    }
    throw BudgetExceeded("no exact route: " + std::to_string(spin_cost) + " spins, rank " +
                         std::to_string(coset_cost) + ", dual rank " + std::to_string(dual_cost));
}

ClassHistograms::ClassHistograms(size_t num_bonds, size_t num_classes)
    : num_bonds_(num_bonds), num_classes_(num_classes), counts_((num_bonds + 1) * num_classes, 0) {
}

PartitionValue ClassHistograms::partition(uint64_t cls, double beta) const {
    return sum_histogram(counts(cls), log_w0(beta), log_w1(beta), 0.0);
}

std::vector<PartitionValue> ClassHistograms::partitions(double beta) const {
    std::vector<PartitionValue> out;
    out.reserve(num_classes_);
    for (uint64_t c = 0; c < num_classes_; c++) {
        out.push_back(partition(c, beta));
    }
    return out;
}

size_t ClassHistograms::min_weight(uint64_t cls) const {
    auto h = counts(cls);
    for (size_t w = 0; w < h.size(); w++) {
        if (h[w] != 0) {
            return w;
        }
    }
    return h.size();
}

ClassHistograms class_histograms(const CodeSector &sector, const BinaryVector &e, const BinaryVector *m,
                                 size_t max_log2) {
    if (e.size() != sector.num_bonds()) {
        throw std::invalid_argument("error vector length differs from the sector's bond count");
    }
    size_t k = sector.num_logicals();
    size_t r = sector.rank_theta();
    if (r + k > max_log2) {
        throw BudgetExceeded("class enumeration needs 2^" + std::to_string(r + k) + " steps, budget 2^" +
                             std::to_string(max_log2));
    }
    ClassHistograms out(sector.num_bonds(), size_t{1} << k);
    const BinaryVector *mm = (m && !m->is_zero()) ? m : nullptr;
    for (uint64_t c = 0; c < out.num_classes(); c++) {
        walk(sector.theta_basis(), e ^ sector.class_vector(c), mm, out.counts(c));
    }
    return out;
}

PartitionValue z0(const CodeSector &sector, const BinaryVector &e, double beta) {
    return eval_coset_enum(WegnerModel(sector.theta()), e, beta, 40);
}

PartitionValue zc(const CodeSector &sector, const BinaryVector &e, uint64_t cls, double beta) {
    return z0(sector, e ^ sector.class_vector(cls), beta);
}

PartitionValue ztot(const CodeSector &sector, const BinaryVector &e, double beta) {
    WegnerModel tot(nullspace(sector.check()));
    return evaluate(tot, DisorderConfig::electric(e), beta, EnumBudget{26, 32});
}

ZMax zmax(const CodeSector &sector, const BinaryVector &e, double beta) {
    auto zs = class_histograms(sector, e).partitions(beta);
    ZMax best{zs[0], 0};
    for (uint64_t c = 1; c < zs.size(); c++) {
        if (zs[c].log_abs > best.value.log_abs) {
            best = {zs[c], c};
        }
    }
    return best;
}

PartitionValue z0(const StabilizerCode &code, Sector sector, const BinaryVector &e, double beta) {
    return z0(CodeSector(code, sector), e, beta);
}

PartitionValue zc(const StabilizerCode &code, Sector sector, const BinaryVector &e, uint64_t cls, double beta) {
    return zc(CodeSector(code, sector), e, cls, beta);
}

PartitionValue ztot(const StabilizerCode &code, Sector sector, const BinaryVector &e, double beta) {
    return ztot(CodeSector(code, sector), e, beta);
}

ZMax zmax(const StabilizerCode &code, Sector sector, const BinaryVector &e, double beta) {
    return zmax(CodeSector(code, sector), e, beta);
}

double correlator_tot(const CodeSector &sector, const BinaryVector &e, const BinaryVector &m, double beta) {
    WegnerModel tot(nullspace(sector.check()));
    EnumBudget budget{26, 32};
    PartitionValue num = evaluate(tot, DisorderConfig{e, m}, beta, budget);
    PartitionValue den = evaluate(tot, DisorderConfig::electric(e), beta, budget);
    if (den.sign <= 0) {
        throw std::domain_error("correlator_tot: vanishing denominator");
    }
    return num.sign * std::exp(num.log_abs - den.log_abs);
}

double correlator_c(const CodeSector &sector, const BinaryVector &e, uint64_t cls, const BinaryVector &m,
                    double beta) {
    WegnerModel model(sector.theta());
    BinaryVector ec = e ^ sector.class_vector(cls);
    EnumBudget budget{26, 32};
    PartitionValue num = evaluate(model, DisorderConfig{ec, m}, beta, budget);
    PartitionValue den = evaluate(model, DisorderConfig::electric(ec), beta, budget);
    if (den.sign <= 0) {
        throw std::domain_error("correlator_c: vanishing denominator");
    }
    return num.sign * std::exp(num.log_abs - den.log_abs);
}

}  // namespace qecspin
