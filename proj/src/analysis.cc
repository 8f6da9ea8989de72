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

#include "qecspin/analysis.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qecspin/decoder.h"
#include "qecspin/runtime.h"

namespace qecspin {

namespace {

std::vector<double> log_partitions(const ClassHistograms &hist, double beta) {
    std::vector<double> out(hist.num_classes());
    for (uint64_t c = 0; c < hist.num_classes(); c++) {
        out[c] = hist.partition(c, beta).log_abs;
    }
    return out;
}

double mean_of(const std::vector<double> &v) {
    double s = 0;
    for (double x : v) {
        s += x;
    }
    return v.empty() ? 0 : s / double(v.size());
}

double stderr_of(const std::vector<double> &v, double mean) {
    if (v.size() < 2) {
        return 0;
    }
    double s = 0;
    for (double x : v) {
        s += (x - mean) * (x - mean);
    }
    return std::sqrt(s / double(v.size() - 1) / double(v.size()));
}

}  // namespace

DefectFreeEnergies defect_free_energies(const ClassHistograms &hist, double beta) {
    if (!(beta > 0)) {
        throw std::domain_error("defect free energies need β > 0");
    }
    std::vector<double> lz = log_partitions(hist, beta);
    DefectFreeEnergies out;
    out.beta = beta;
    out.c_max = uint64_t(std::max_element(lz.begin(), lz.end()) - lz.begin());
    out.delta_max.resize(lz.size());
    out.delta_0.resize(lz.size());
    for (uint64_t c = 0; c < lz.size(); c++) {
        out.delta_max[c] = (lz[out.c_max] - lz[out.c_max ^ c]) / beta;
        out.delta_0[c] = (lz[0] - lz[c]) / beta;
    }
    return out;
}

DefectFreeEnergies defect_free_energies(const CodeSector &sector, const BinaryVector &e, double beta) {
    return defect_free_energies(class_histograms(sector, e), beta);
}

double delta_f_max(const CodeSector &sector, const BinaryVector &e, uint64_t cls, double beta) {
    if (cls >= (uint64_t{1} << sector.num_logicals())) {
        throw std::out_of_range("class label out of range");
    }
    return defect_free_energies(sector, e, beta).delta_max[cls];
}

double delta_f_0(const CodeSector &sector, const BinaryVector &e, uint64_t cls, double beta) {
    if (cls >= (uint64_t{1} << sector.num_logicals())) {
        throw std::out_of_range("class label out of range");
    }
    return defect_free_energies(sector, e, beta).delta_0[cls];
}

double delta_f_max(const StabilizerCode &code, Sector sector, const BinaryVector &e, uint64_t cls, double beta) {
    return delta_f_max(CodeSector(code, sector), e, cls, beta);
}

double delta_f_0(const StabilizerCode &code, Sector sector, const BinaryVector &e, uint64_t cls, double beta) {
    return delta_f_0(CodeSector(code, sector), e, cls, beta);
}

std::vector<size_t> class_min_weights(const CodeSector &sector) {
    ClassHistograms hist = class_histograms(sector, BinaryVector(sector.num_bonds()));
    std::vector<size_t> d(hist.num_classes());
    for (uint64_t c = 0; c < d.size(); c++) {
        d[c] = hist.min_weight(c);
    }
    return d;
}

std::vector<double> syndrome_avg_delta_f(const ClassHistograms &hist, double beta) {
    std::vector<double> lz = log_partitions(hist, beta);
    double top = *std::max_element(lz.begin(), lz.end());
    double total = 0;
    for (double v : lz) {
        total += std::exp(v - top);
    }
    std::vector<double> out(lz.size(), 0.0);
    for (uint64_t c = 0; c < lz.size(); c++) {
        double acc = 0;
        for (uint64_t b = 0; b < lz.size(); b++) {
            double w = std::exp(lz[b] - top) / total;
            acc += w * (lz[b] - lz[b ^ c]);
        }
        out[c] = acc / beta;
    }
    return out;
}

double syndrome_avg_delta_f(const CodeSector &sector, const BinaryVector &s, uint64_t cls, double p) {
    auto e = sector.error_for_syndrome(s);
    if (!e) {
        throw std::invalid_argument("syndrome is not reachable in this sector");
    }
    if (cls >= (uint64_t{1} << sector.num_logicals())) {
        throw std::out_of_range("class label out of range");
    }
    return syndrome_avg_delta_f(class_histograms(sector, *e), nishimori_beta(p))[cls];
}

std::vector<BoundScan> bound_scan(const StabilizerCode &code, Sector sector, const std::vector<double> &ps,
                                  double tolerance) {
    CodeSector cs(code, sector);
    std::vector<size_t> d = class_min_weights(cs);
    std::vector<double> betas;
    std::vector<BoundScan> out;
    for (double p : ps) {
        betas.push_back(nishimori_beta(p));
        BoundScan b;
        b.code_name = code.name();
        b.sector = sector_name(sector);
        b.p = p;
        b.worst_slack = std::numeric_limits<double>::infinity();
        out.push_back(b);
    }

    // Unit errors on the pivot columns of the check matrix reach every syndrome once.
    std::vector<size_t> pivots = rref(cs.check()).pivots;
    size_t nb = cs.num_bonds();
    std::vector<BinaryVector> units;
    for (size_t col : pivots) {
        units.push_back(BinaryVector::unit(nb, col));
    }
    if (units.size() >= 40) {
        throw BudgetExceeded("bound_scan: 2^" + std::to_string(units.size()) + " syndromes");
    }

    auto note = [&](BoundScan &scan, double slack, const char *what, uint64_t c) {
        scan.checks++;
        if (slack < -tolerance) {
            scan.violations++;
        }
        if (slack < scan.worst_slack) {
            scan.worst_slack = slack;
            std::ostringstream os;
            os << what << " class " << c << " syndrome #" << scan.syndromes;
            scan.worst = os.str();
        }
    };

    BinaryVector e(nb);
    uint64_t total = uint64_t{1} << units.size();
    for (uint64_t i = 0; i < total; i++) {
        if (i > 0) {
            e ^= units[std::countr_zero(i)];
        }
        ClassHistograms hist = class_histograms(cs, e);
        for (size_t j = 0; j < ps.size(); j++) {
            BoundScan &scan = out[j];
            DefectFreeEnergies f = defect_free_energies(hist, betas[j]);
            std::vector<double> avg = syndrome_avg_delta_f(hist, betas[j]);
            for (uint64_t c = 1; c < hist.num_classes(); c++) {
                double bound = 2.0 * double(d[c]);
                note(scan, f.delta_max[c], "dFmax>=0", c);
                note(scan, bound - f.delta_max[c], "dFmax<=2d", c);
                note(scan, bound - f.delta_0[c], "dF0<=2d", c);
                note(scan, avg[c], "dFs>=0", c);
                note(scan, bound - avg[c], "dFs<=2d", c);
            }
            scan.syndromes++;
        }
    }
    for (auto &scan : out) {
        if (scan.checks == 0) {
            scan.worst_slack = 0;
        }
    }
    return out;
}

namespace {

struct SectorSamples {
    std::vector<size_t> d;
    /// [sample][class]
    std::vector<std::vector<double>> dmax;
    std::vector<std::vector<double>> d0;
};

SectorSamples sample_sector(const CodeSector &cs, double p, double beta, size_t samples, uint64_t seed,
                            uint64_t stream, const TensionOptions &options) {
    SectorSamples out;
    out.d = class_min_weights(cs);
    out.dmax.resize(samples);
    out.d0.resize(samples);
    size_t nb = cs.num_bonds();
    parallel_for(samples, options.threads, [&](size_t i) {
        std::mt19937_64 rng(stream_seed(seed, i, stream));
        BinaryVector e = sample_error({p}, nb, rng);
        DefectFreeEnergies f = defect_free_energies(class_histograms(cs, e, nullptr, options.max_log2), beta);
        out.dmax[i] = std::move(f.delta_max);
        out.d0[i] = std::move(f.delta_0);
    });
    return out;
}

}  // namespace

TensionReport tension_report(const StabilizerCode &code, Sector sector, double p, double beta, size_t samples,
                             uint64_t seed, const TensionOptions &options) {
    if (samples == 0) {
        throw std::invalid_argument("tension_report: need at least one disorder sample");
    }
    TensionReport r;
    r.code_name = code.name();
    r.n = code.n();
    r.k = code.k();
    r.rate = code.n() ? double(code.k()) / double(code.n()) : 0;
    r.p = p;
    r.beta = beta;
    r.seed = seed;
    r.samples = samples;

    // Per-class sample vectors of ΔF_max and ΔF_0 plus d_c, filled by one of the two routes.
    std::vector<size_t> d;
    std::vector<std::vector<double>> dmax, d0;  // [sample][class]

    if (sector == Sector::kFull && code.is_css()) {
        r.scope = "full(XxZ)";
        CodeSector sx(code, Sector::kX), sz(code, Sector::kZ);
        SectorSamples ax = sample_sector(sx, p, beta, samples, seed, 1, options);
        SectorSamples az = sample_sector(sz, p, beta, samples, seed, 2, options);
        size_t kx = sx.num_logicals();
        size_t nx = size_t{1} << kx, nz = size_t{1} << sz.num_logicals();
        d.resize(nx * nz);
        for (size_t cz = 0; cz < nz; cz++) {
            for (size_t cx = 0; cx < nx; cx++) {
                d[cx | (cz << kx)] = ax.d[cx] + az.d[cz];
            }
        }
        dmax.resize(samples);
        d0.resize(samples);
        for (size_t i = 0; i < samples; i++) {
            dmax[i].resize(nx * nz);
            d0[i].resize(nx * nz);
            for (size_t cz = 0; cz < nz; cz++) {
                for (size_t cx = 0; cx < nx; cx++) {
                    dmax[i][cx | (cz << kx)] = ax.dmax[i][cx] + az.dmax[i][cz];
                    d0[i][cx | (cz << kx)] = ax.d0[i][cx] + az.d0[i][cz];
                }
            }
        }
    } else {
        r.scope = sector_name(sector);
        CodeSector cs(code, sector);
        SectorSamples a = sample_sector(cs, p, beta, samples, seed, uint64_t(sector) + 1, options);
        d = std::move(a.d);
        dmax = std::move(a.dmax);
        d0 = std::move(a.d0);
    }

    r.num_classes = d.size();
    if (d.size() <= 1) {
        r.lambda_bar_samples.assign(samples, 0.0);
        r.margin = -r.rate * std::log(2.0);
        return r;
    }

    std::vector<double> col(samples), col0(samples);
    for (uint64_t c = 1; c < d.size(); c++) {
        DefectReport rep;
        rep.cls = c;
        rep.d_c = d[c];
        for (size_t i = 0; i < samples; i++) {
            col[i] = dmax[i][c];
            col0[i] = d0[i][c];
        }
        rep.delta_f_max = mean_of(col);
        rep.delta_f_max_err = stderr_of(col, rep.delta_f_max);
        rep.delta_f_0 = mean_of(col0);
        rep.delta_f_0_err = stderr_of(col0, rep.delta_f_0);
        rep.tension = rep.delta_f_max / double(d[c]);
        rep.tension_err = rep.delta_f_max_err / double(d[c]);
        r.classes.push_back(rep);
    }

    r.lambda_bar_samples.resize(samples);
    for (size_t i = 0; i < samples; i++) {
        double s = 0;
        for (uint64_t c = 1; c < d.size(); c++) {
            s += dmax[i][c] / double(d[c]);
        }
        r.lambda_bar_samples[i] = s / double(d.size() - 1);
    }
    r.lambda_bar = mean_of(r.lambda_bar_samples);
    r.lambda_bar_err = stderr_of(r.lambda_bar_samples, r.lambda_bar);
    r.margin = beta * r.lambda_bar - r.rate * std::log(2.0);
    r.margin_err = beta * r.lambda_bar_err;
    return r;
}

double self_dual_beta() {
    return 0.5 * std::log(1.0 + std::sqrt(2.0));
}

SelfDualCheck clean_self_dual_check(const StabilizerCode &code, Sector sector) {
    SelfDualCheck out;
    out.sector = sector_name(sector);
    out.beta = self_dual_beta();
    CodeSector cs(code, sector);
    ClassHistograms hist = class_histograms(cs, BinaryVector(cs.num_bonds()));
    std::vector<double> lz = log_partitions(hist, out.beta);
    for (uint64_t c = 1; c < lz.size(); c++) {
        out.lhs += std::exp(lz[c] - lz[0]);
    }
    if (sector == Sector::kFull) {
        out.target = std::ldexp(1.0, int(code.k())) - 1;
        out.target_form = "2^k - 1";
    } else {
        if (!code.is_css()) {
            throw std::invalid_argument("clean_self_dual_check: X/Z sectors need a CSS code");
        }
        Sector other = sector == Sector::kX ? Sector::kZ : Sector::kX;
        CodeSector co(code, other);
        double lz_other = z0(co, BinaryVector(co.num_bonds()), out.beta).log_abs;
        double expo = 0.5 * double(code.n()) - double(co.rank_theta());
        out.target = std::exp(expo * std::log(2.0) + lz_other - lz[0]) - 1;
        out.target_form = "2^{n/2 - rank G_other} Z0_other/Z0 - 1";
    }
    out.residual = std::abs(out.lhs - out.target);
    return out;
}

double binary_entropy(double p) {
    if (!(p >= 0 && p <= 1)) {
        throw std::domain_error("binary_entropy: p outside [0, 1]");
    }
    if (p == 0 || p == 1) {
        return 0;
    }
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

namespace {

// Root of H₂(p) = h on (0, ½], H₂ increasing there.
double entropy_root(double h) {
    double lo = 0, hi = 0.5;
    for (int it = 0; it < 200 && hi - lo > 1e-15; it++) {
        double mid = 0.5 * (lo + hi);
        if (binary_entropy(mid) < h) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double conjectured_pc() {
    return entropy_root(0.5);
}

double shannon_p(double rate) {
    if (!(rate >= 0 && rate < 1)) {
        throw std::domain_error("shannon_p: rate outside [0, 1)");
    }
    if (rate == 0) {
        return 0.5;
    }
    return entropy_root(1 - rate);
}

IndicatorSignature indicator_signature(const CodeSector &sector, const BinaryVector &e, double beta) {
    IndicatorSignature out;
    const BinaryMatrix &dual = sector.dual_logicals();
    for (size_t j = 0; j < dual.rows(); j++) {
        double q = correlator_tot(sector, e, dual.row(j), beta);
        out.values.push_back(q);
        if (q < 0) {
            out.dominant |= uint64_t{1} << j;
        }
    }
    return out;
}

ExpansionCheck correlation_expansion_check(const CodeSector &sector, const BinaryVector &e, const BinaryVector &m,
                                           double beta) {
    ExpansionCheck out;
    out.lhs = correlator_tot(sector, e, m, beta);
    double lz_tot = ztot(sector, e, beta).log_abs;
    uint64_t classes = uint64_t{1} << sector.num_logicals();
    for (uint64_t c = 0; c < classes; c++) {
        double sign = sector.class_vector(c).dot(m) ? -1 : 1;
        double zc_ratio = std::exp(zc(sector, e, c, beta).log_abs - lz_tot);
        out.rhs += sign * zc_ratio * correlator_c(sector, e, c, m, beta);
    }
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

nlohmann::json to_json(const TensionReport &r) {
    nlohmann::json j;
    j["code"] = r.code_name;
    j["scope"] = r.scope;
    j["n"] = r.n;
    j["k"] = r.k;
    j["rate"] = r.rate;
    j["p"] = r.p;
    j["beta"] = r.beta;
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    j["num_classes"] = r.num_classes;
    j["lambda_bar"] = r.lambda_bar;
    j["lambda_bar_err"] = r.lambda_bar_err;
    j["margin"] = r.margin;
    j["margin_err"] = r.margin_err;
    nlohmann::json cls = nlohmann::json::array();
    for (const auto &c : r.classes) {
        cls.push_back({{"class", c.cls},
                       {"d_c", c.d_c},
                       {"dF_max", c.delta_f_max},
                       {"dF_max_err", c.delta_f_max_err},
                       {"dF_0", c.delta_f_0},
                       {"dF_0_err", c.delta_f_0_err},
                       {"tension", c.tension},
                       {"tension_err", c.tension_err}});
    }
    j["classes"] = cls;
    return j;
}

nlohmann::json to_json(const BoundScan &r) {
    return {{"code", r.code_name},   {"sector", r.sector},         {"p", r.p},
            {"syndromes", r.syndromes}, {"checks", r.checks},      {"violations", r.violations},
            {"worst_slack", r.worst_slack}, {"worst", r.worst}};
}

nlohmann::json to_json(const SelfDualCheck &r) {
    return {{"sector", r.sector}, {"beta", r.beta},           {"lhs", r.lhs},
            {"target", r.target}, {"target_form", r.target_form}, {"residual", r.residual}};
}

void write_csv(std::ostream &out, const TensionReport &r) {
    out << "class,d_c,dF_max,dF_max_err,dF_0,dF_0_err,tension,tension_err\n";
    for (const auto &c : r.classes) {
        out << c.cls << ',' << c.d_c << ',' << c.delta_f_max << ',' << c.delta_f_max_err << ',' << c.delta_f_0 << ','
            << c.delta_f_0_err << ',' << c.tension << ',' << c.tension_err << '\n';
    }
}

}  // namespace qecspin
