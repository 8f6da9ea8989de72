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

#include "qecspin/decoder.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qecspin/runtime.h"

namespace qecspin {

namespace {

double log_sum(const std::vector<double> &xs) {
    double mx = *std::max_element(xs.begin(), xs.end());
    double s = 0;
    for (double x : xs) {
        s += std::exp(x - mx);
    }
    return mx + std::log(s);
}

struct MeanErr {
    double mean = 0;
    double stderr = 0;
};

MeanErr sample_mean(const std::vector<double> &xs) {
    MeanErr out;
    if (xs.empty()) {
        return out;
    }
    double n = double(xs.size());
    for (double x : xs) {
        out.mean += x;
    }
    out.mean /= n;
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) {
            ss += (x - out.mean) * (x - out.mean);
        }
        out.stderr = std::sqrt(ss / (n - 1) / n);
    }
    return out;
}

PsuccEstimate summarize(const std::vector<uint8_t> &success, const std::vector<double> &ratio, size_t ties) {
    PsuccEstimate est;
    est.trials = success.size();
    double n = double(success.size());
    double hits = 0;
    for (auto s : success) {
        hits += s;
    }
    est.mean = hits / n;
    est.stderr = std::sqrt(est.mean * (1 - est.mean) / n);
    MeanErr r = sample_mean(ratio);
    est.zratio_mean = r.mean;
    est.zratio_stderr = r.stderr;
    est.ties = ties;
    return est;
}

}  // namespace

double nishimori_beta(double p) {
    if (!(p > 0 && p < 0.5)) {
        throw std::domain_error("nishimori_beta needs 0 < p < 1/2");
    }
    return 0.5 * std::log((1 - p) / p);
}

BinaryVector sample_error(const ErrorModel &model, size_t num_bits, std::mt19937_64 &rng) {
    if (!(model.p >= 0 && model.p <= 0.5)) {
        throw std::domain_error("error rate must lie in [0, 1/2]");
    }
    BinaryVector e(num_bits);
    for (size_t i = 0; i < num_bits; i++) {
        if (uniform01(rng) < model.p) {
            e.set(i, true);
        }
    }
    return e;
}

SectorDecoder::SectorDecoder(const StabilizerCode &code, Sector sector, size_t max_log2)
    : sector_(code, sector), max_log2_(max_log2) {
}

DecodeOutcome SectorDecoder::decode(const BinaryVector &syndrome, double beta) const {
    auto base = sector_.error_for_syndrome(syndrome);
    if (!base) {
        throw std::invalid_argument("syndrome is not reachable by any error");
    }
    DecodeOutcome out;
    out.syndrome = syndrome;
    out.correction_base = *base;
    ClassHistograms hist = class_histograms(sector_, *base, nullptr, max_log2_);
    auto zs = hist.partitions(beta);
    out.log_z.reserve(zs.size());
    for (const auto &z : zs) {
        out.log_z.push_back(z.log_abs);
    }
    out.log_z_tot = log_sum(out.log_z);
    double best = *std::max_element(out.log_z.begin(), out.log_z.end());
    double tol = 1e-12 * std::max(1.0, std::abs(best));
    std::vector<uint64_t> tied;
    for (uint64_t c = 0; c < out.log_z.size(); c++) {
        if (out.log_z[c] >= best - tol) {
            tied.push_back(c);
        }
    }
    out.c_max = tied[0];
    out.correction = *base ^ sector_.class_vector(tied[0]);
    if (tied.size() > 1) {
        // equal class sums: lexicographically smallest minimum-weight member wins
        out.tie = true;
        BinaryMatrix theta = BinaryMatrix::from_rows(sector_.theta_basis(), sector_.num_bonds());
        std::optional<BinaryVector> winner;
        for (uint64_t c : tied) {
            auto cw = coset_min_weight(*base ^ sector_.class_vector(c), theta);
            if (!winner || cw.weight < winner->weight() ||
                (cw.weight == winner->weight() && cw.argmin < *winner)) {
                winner = cw.argmin;
                out.c_max = c;
            }
        }
        out.correction = *winner;
    }
    out.log_z_max = out.log_z[out.c_max];
    out.p_succ_conditional = std::exp(out.log_z_max - out.log_z_tot);
    return out;
}

DecodeOutcome SectorDecoder::decode_error(const BinaryVector &e, double beta) const {
    DecodeOutcome out = decode(sector_.syndrome(e), beta);
    out.success = sector_.class_of(e ^ out.correction_base) == out.c_max;
    return out;
}

DecodeOutcome ml_decode(const StabilizerCode &code, Sector sector, const BinaryVector &s, double beta) {
    return SectorDecoder(code, sector).decode(s, beta);
}

PsuccEstimate estimate_psucc(const StabilizerCode &code, Sector sector, double p, double beta, size_t trials,
                             uint64_t seed, const PsuccOptions &options) {
    if (trials == 0) {
        throw std::invalid_argument("estimate_psucc needs at least one trial");
    }
    SectorDecoder decoder(code, sector);
    std::vector<uint8_t> success(trials);
    std::vector<double> ratio(trials);
    std::vector<TrialRecord> records(trials);
    std::vector<uint8_t> tie(trials);
    parallel_for(trials, options.threads, [&](size_t i) {
        uint64_t s = stream_seed(seed, uint64_t(sector), i);
        std::mt19937_64 rng(s);
        BinaryVector e = sample_error({p}, decoder.sector().num_bonds(), rng);
        DecodeOutcome out = decoder.decode_error(e, beta);
        success[i] = out.success;
        ratio[i] = out.p_succ_conditional;
        tie[i] = out.tie;
        records[i] = {s, p, beta, options.code_id, sector_name(sector), out.success, out.log_z_max, out.log_z_tot};
    });
    if (options.sink) {
        for (const auto &r : records) {
            options.sink(r);
        }
    }
    return summarize(success, ratio, size_t(std::count(tie.begin(), tie.end(), 1)));
}

PsuccEstimate estimate_psucc_css(const StabilizerCode &code, double p, double beta, size_t trials, uint64_t seed,
                                 const PsuccOptions &options) {
    if (trials == 0) {
        throw std::invalid_argument("estimate_psucc needs at least one trial");
    }
    SectorDecoder dx(code, Sector::kX);
    SectorDecoder dz(code, Sector::kZ);
    std::vector<uint8_t> success(trials);
    std::vector<double> ratio(trials);
    std::vector<uint8_t> tie(trials);
    std::vector<std::array<TrialRecord, 2>> records(trials);
    parallel_for(trials, options.threads, [&](size_t i) {
        uint64_t s = stream_seed(seed, 0, i);
        std::mt19937_64 rng(s);
        // v half (X sector bonds) first, then u half
        BinaryVector ex = sample_error({p}, code.n(), rng);
        BinaryVector ez = sample_error({p}, code.n(), rng);
        DecodeOutcome ox = dx.decode_error(ex, beta);
        DecodeOutcome oz = dz.decode_error(ez, beta);
        success[i] = ox.success && oz.success;
        ratio[i] = ox.p_succ_conditional * oz.p_succ_conditional;
        tie[i] = ox.tie || oz.tie;
        records[i][0] = {s, p, beta, options.code_id, "X", ox.success, ox.log_z_max, ox.log_z_tot};
        records[i][1] = {s, p, beta, options.code_id, "Z", oz.success, oz.log_z_max, oz.log_z_tot};
    });
    if (options.sink) {
        for (const auto &pair : records) {
            options.sink(pair[0]);
            options.sink(pair[1]);
        }
    }
    return summarize(success, ratio, size_t(std::count(tie.begin(), tie.end(), 1)));
}

double exhaustive_psucc(const StabilizerCode &code, Sector sector, double p, double beta) {
    SectorDecoder decoder(code, sector);
    size_t nb = decoder.sector().num_bonds();
    if (nb > 24) {
        throw BudgetExceeded("exhaustive_psucc: 2^" + std::to_string(nb) + " errors");
    }
    std::map<BinaryVector, DecodeOutcome> cache;
    double total = 0;
    for (uint64_t bits = 0; bits < (uint64_t{1} << nb); bits++) {
        BinaryVector e(nb);
        e.words()[0] = bits;
        BinaryVector s = decoder.sector().syndrome(e);
        auto it = cache.find(s);
        if (it == cache.end()) {
            it = cache.emplace(s, decoder.decode(s, beta)).first;
        }
        const DecodeOutcome &out = it->second;
        if (decoder.sector().class_of(e ^ out.correction_base) == out.c_max) {
            size_t w = std::popcount(bits);
            total += std::pow(p, double(w)) * std::pow(1 - p, double(nb - w));
        }
    }
    return total;
}

double sum_zmax_over_syndromes(const StabilizerCode &code, Sector sector, double beta) {
    SectorDecoder decoder(code, sector);
    const CodeSector &cs = decoder.sector();
    EchelonBasis image(cs.check().rows(), 0);
    BinaryMatrix ct = cs.check().transpose();
    for (const auto &col : ct.row_list()) {
        image.insert(col);
    }
    const auto &basis = image.rows();
    if (basis.size() > 24) {
        throw BudgetExceeded("sum_zmax_over_syndromes: 2^" + std::to_string(basis.size()) + " syndromes");
    }
    BinaryVector s(cs.check().rows());
    double total = std::exp(decoder.decode(s, beta).log_z_max);
    for (uint64_t i = 1; i < (uint64_t{1} << basis.size()); i++) {
        s ^= basis[std::countr_zero(i)];
        total += std::exp(decoder.decode(s, beta).log_z_max);
    }
    return total;
}

std::optional<double> curve_crossing(const std::vector<double> &p, const std::vector<double> &small,
                                     const std::vector<double> &large) {
    if (p.size() != small.size() || p.size() != large.size()) {
        throw std::invalid_argument("curve_crossing: grid and curves differ in length");
    }
    std::optional<double> rising;
    for (size_t j = 0; j + 1 < p.size(); j++) {
        double a = large[j] - small[j];
        double b = large[j + 1] - small[j + 1];
        if (a == 0) {
            return p[j];
        }
        if ((a > 0) != (b > 0) && b != 0) {
            double t = a / (a - b);
            double x = p[j] + t * (p[j + 1] - p[j]);
            if (a > 0) {
                // larger code better below, worse above: the threshold-like crossing
                return x;
            }
            if (!rising) {
                rising = x;
            }
        }
    }
    return rising;
}

ThresholdScan threshold_scan(const std::vector<StabilizerCode> &family, const std::vector<std::string> &labels,
                             const std::vector<double> &p_grid, size_t trials, uint64_t seed,
                             const ThresholdOptions &options) {
    if (family.size() < 2) {
        throw std::invalid_argument("threshold_scan needs at least two codes");
    }
    if (trials == 0) {
        throw std::invalid_argument("threshold_scan needs at least one trial per point");
    }
    if (labels.size() != family.size()) {
        throw std::invalid_argument("threshold_scan: one label per code");
    }
    ThresholdScan scan;
    scan.labels = labels;
    for (size_t i = 0; i < family.size(); i++) {
        std::vector<CurvePoint> curve;
        for (size_t j = 0; j < p_grid.size(); j++) {
            PsuccOptions po;
            po.threads = options.threads;
            po.code_id = labels[i];
            po.sink = options.sink;
            double beta = nishimori_beta(p_grid[j]);
            curve.push_back({p_grid[j], estimate_psucc_css(family[i], p_grid[j], beta, trials,
                                                           stream_seed(seed, i, j), po)});
        }
        scan.curves.push_back(std::move(curve));
    }
    auto values = [&](size_t i) {
        std::vector<double> v;
        for (const auto &pt : scan.curves[i]) {
            v.push_back(options.use_zratio ? pt.estimate.zratio_mean : pt.estimate.mean);
        }
        return v;
    };
    for (size_t i = 0; i + 1 < family.size(); i++) {
        auto x = curve_crossing(p_grid, values(i), values(i + 1));
        if (x) {
            scan.crossings.push_back(*x);
        } else {
            scan.diagnostic += labels[i] + " and " + labels[i + 1] + " do not cross on the grid; ";
        }
    }
    if (!scan.crossings.empty()) {
        std::vector<double> sorted = scan.crossings;
        std::sort(sorted.begin(), sorted.end());
        size_t m = sorted.size();
        scan.median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
        scan.spread = sorted.back() - sorted.front();
    }
    return scan;
}

}  // namespace qecspin
