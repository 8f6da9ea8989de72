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

#include "qecspin/montecarlo.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qecspin/decoder.h"
#include "qecspin/runtime.h"

namespace qecspin {

MetropolisSampler::MetropolisSampler(const WegnerModel &model, const BinaryVector &e, double beta, uint64_t seed)
    : model_(&model), e_(e), beta_(beta), rng_(seed) {
    const BinaryMatrix &theta = model.theta();
    size_t ns = theta.rows();
    size_t nb = theta.cols();
    if (e.size() != nb) {
        throw std::invalid_argument("MetropolisSampler: e has the wrong length");
    }
    j_ = model.couplings();
    spin_bonds_.resize(ns);
    bond_spins_.resize(nb);
    for (size_t r = 0; r < ns; r++) {
        const BinaryVector &row = theta.row(r);
        for (size_t b = 0; b < nb; b++) {
            if (row.get(b)) {
                spin_bonds_[r].push_back(uint32_t(b));
                bond_spins_[b].push_back(uint32_t(r));
            }
        }
    }
    spins_.resize(ns);
    for (auto &s : spins_) {
        s = (rng_() >> 63) ? -1 : 1;
    }
    bonds_.resize(nb);
    energy_ = 0;
    for (size_t b = 0; b < nb; b++) {
        int v = e_.get(b) ? -1 : 1;
        for (uint32_t r : bond_spins_[b]) {
            v *= spins_[r];
        }
        bonds_[b] = int8_t(v);
        energy_ -= j_[b] * v;
    }
}

void MetropolisSampler::sweep() {
    if (spins_.empty()) {
        return;
    }
    // random sites: an ordered sweep at β = 0 flips every spin once and freezes even-weight bonds
    std::uniform_int_distribution<size_t> pick(0, spins_.size() - 1);
    for (size_t step = 0; step < spins_.size(); step++) {
        size_t r = pick(rng_);
        double local = 0;
        for (uint32_t b : spin_bonds_[r]) {
            local += j_[b] * bonds_[b];
        }
        double delta = 2 * local;
        attempted_++;
        bool accept = delta <= 0;
        if (!accept) {
            accept = uniform01(rng_) < std::exp(-beta_ * delta);
        }
        if (accept) {
            accepted_++;
            spins_[r] = int8_t(-spins_[r]);
            for (uint32_t b : spin_bonds_[r]) {
                bonds_[b] = int8_t(-bonds_[b]);
            }
            energy_ += delta;
        }
    }
}

int MetropolisSampler::bond_product(const BinaryVector &m) const {
    int v = 1;
    for (size_t b = 0; b < bonds_.size(); b++) {
        if (m.get(b)) {
            v *= bonds_[b] * (e_.get(b) ? -1 : 1);
        }
    }
    return v;
}

void MetropolisSampler::check_consistency() const {
    double energy = 0;
    for (size_t b = 0; b < bonds_.size(); b++) {
        int v = e_.get(b) ? -1 : 1;
        for (uint32_t r : bond_spins_[b]) {
            v *= spins_[r];
        }
        if (v != bonds_[b]) {
            throw std::logic_error("MetropolisSampler: cached bond " + std::to_string(b) + " is stale");
        }
        energy -= j_[b] * v;
    }
    if (std::abs(energy - energy_) > 1e-9 * (1 + std::abs(energy))) {
        throw std::logic_error("MetropolisSampler: cached energy drifted");
    }
}

McEstimate blocked_estimate(const std::vector<double> &samples, size_t blocks) {
    if (blocks < 2) {
        throw std::invalid_argument("blocked_estimate: need at least 2 blocks");
    }
    McEstimate out;
    out.sweeps = samples.size();
    size_t len = samples.size() / blocks;
    if (len == 0) {
        throw std::invalid_argument("blocked_estimate: fewer samples than blocks");
    }
    size_t start = samples.size() - len * blocks;

    double total = 0;
    for (size_t i = start; i < samples.size(); i++) {
        total += samples[i];
    }
    size_t used = len * blocks;
    out.mean = total / double(used);

    double var_single = 0;
    for (size_t i = start; i < samples.size(); i++) {
        double d = samples[i] - out.mean;
        var_single += d * d;
    }
    var_single /= double(used > 1 ? used - 1 : 1);

    double var_blocks = 0;
    for (size_t k = 0; k < blocks; k++) {
        double s = 0;
        for (size_t i = 0; i < len; i++) {
            s += samples[start + k * len + i];
        }
        double d = s / double(len) - out.mean;
        var_blocks += d * d;
    }
    var_blocks /= double(blocks - 1);
    out.stderr = std::sqrt(var_blocks / double(blocks));
    // var(block mean) ≈ 2τ σ² / len
    out.tau = var_single > 0 ? std::max(0.5, 0.5 * double(len) * var_blocks / var_single) : 0.5;
    return out;
}

void McTrace::write_csv(std::ostream &out) const {
    out << "sweep,energy,observable\n";
    for (size_t i = 0; i < energy.size(); i++) {
        out << i << ',' << energy[i] << ',';
        if (i < observable.size()) {
            out << observable[i];
        }
        out << '\n';
    }
}

McRun metropolis_run(const WegnerModel &model, const BinaryVector &e, double beta, size_t sweeps, size_t burn_in,
                     uint64_t seed, const BinaryVector *m) {
    if (sweeps <= burn_in) {
        throw std::invalid_argument("metropolis_run: sweeps must exceed burn_in");
    }
    McRun run{MetropolisSampler(model, e, beta, seed), {}, burn_in};
    for (size_t i = 0; i < burn_in; i++) {
        run.sampler.sweep();
    }
    run.trace.energy.reserve(sweeps - burn_in);
    for (size_t i = burn_in; i < sweeps; i++) {
        run.sampler.sweep();
        run.trace.energy.push_back(run.sampler.energy());
        if (m) {
            run.trace.observable.push_back(run.sampler.bond_product(*m));
        }
    }
    return run;
}

size_t pilot_burn_in(const WegnerModel &model, const BinaryVector &e, double beta, uint64_t seed) {
    constexpr size_t kPilot = 2048;
    McRun pilot = metropolis_run(model, e, beta, kPilot, kPilot / 4, seed);
    McEstimate est = blocked_estimate(pilot.trace.energy);
    return std::max<size_t>(50, size_t(std::ceil(10 * est.tau)));
}

namespace {

size_t resolve_burn_in(const WegnerModel &model, const BinaryVector &e, double beta, size_t sweeps, uint64_t seed,
                       std::optional<size_t> burn_in) {
    size_t b = burn_in ? *burn_in : pilot_burn_in(model, e, beta, stream_seed(seed, 0x9170));
    if (b >= sweeps) {
        throw std::invalid_argument("Monte Carlo: burn-in " + std::to_string(b) + " leaves no samples in " +
                                    std::to_string(sweeps) + " sweeps");
    }
    return b;
}

double sample_variance(const double *x, size_t n) {
    double mean = 0;
    for (size_t i = 0; i < n; i++) {
        mean += x[i];
    }
    mean /= double(n);
    double v = 0;
    for (size_t i = 0; i < n; i++) {
        v += (x[i] - mean) * (x[i] - mean);
    }
    return v / double(n);
}

}  // namespace

EnergyCv estimate_energy_and_cv(const WegnerModel &model, const BinaryVector &e, double beta, size_t sweeps,
                                uint64_t seed, std::optional<size_t> burn_in) {
    size_t b = resolve_burn_in(model, e, beta, sweeps, seed, burn_in);
    McRun run = metropolis_run(model, e, beta, sweeps, b, seed);
    const auto &x = run.trace.energy;

    EnergyCv out;
    out.energy = blocked_estimate(x);
    out.energy.burn_in = b;

    // Jackknife over the same 16 blocks for the variance estimator.
    constexpr size_t kBlocks = 16;
    size_t len = x.size() / kBlocks;
    size_t start = x.size() - len * kBlocks;
    const double *base = x.data() + start;
    size_t used = len * kBlocks;
    double full = beta * beta * sample_variance(base, used);

    double sum = 0, sum_sq = 0;
    for (size_t i = 0; i < used; i++) {
        sum += base[i];
        sum_sq += base[i] * base[i];
    }
    std::vector<double> jack(kBlocks);
    for (size_t k = 0; k < kBlocks; k++) {
        double s = 0, s2 = 0;
        for (size_t i = 0; i < len; i++) {
            double v = base[k * len + i];
            s += v;
            s2 += v * v;
        }
        double cnt = double(used - len);
        double mean = (sum - s) / cnt;
        jack[k] = beta * beta * ((sum_sq - s2) / cnt - mean * mean);
    }
    double jmean = 0;
    for (double v : jack) {
        jmean += v;
    }
    jmean /= kBlocks;
    double jvar = 0;
    for (double v : jack) {
        jvar += (v - jmean) * (v - jmean);
    }
    jvar *= double(kBlocks - 1) / kBlocks;

    out.specific_heat.mean = full;
    out.specific_heat.stderr = std::sqrt(jvar);
    out.specific_heat.tau = out.energy.tau;
    out.specific_heat.sweeps = x.size();
    out.specific_heat.burn_in = b;
    return out;
}

McEstimate estimate_correlator(const WegnerModel &model, const BinaryVector &e, const BinaryVector &m, double beta,
                               size_t sweeps, uint64_t seed, std::optional<size_t> burn_in) {
    size_t b = resolve_burn_in(model, e, beta, sweeps, seed, burn_in);
    McRun run = metropolis_run(model, e, beta, sweeps, b, seed, &m);
    McEstimate out = blocked_estimate(run.trace.observable);
    out.burn_in = b;
    return out;
}

ExactMoments exact_energy_moments(const WegnerModel &model, const BinaryVector &e, double beta) {
    const auto &basis = model.basis();
    const auto &j = model.couplings();
    if (basis.size() > 26) {
        throw BudgetExceeded("exact_energy_moments: rank " + std::to_string(basis.size()) + " over budget");
    }
    size_t nb = model.num_bonds();
    auto energy_of = [&](const BinaryVector &x) {
        double en = 0;
        for (size_t b = 0; b < nb; b++) {
            en -= x.get(b) ? -j[b] : j[b];
        }
        return en;
    };
    uint64_t count = uint64_t(1) << basis.size();
    auto walk = [&](auto &&visit) {
        BinaryVector x = e;
        visit(energy_of(x));
        for (uint64_t g = 1; g < count; g++) {
            x = x ^ basis[std::countr_zero(g)];
            visit(energy_of(x));
        }
    };
    double e_min = std::numeric_limits<double>::infinity();
    walk([&](double en) { e_min = std::min(e_min, en); });
    double z = 0, s1 = 0, s2 = 0;
    walk([&](double en) {
        double w = std::exp(-beta * (en - e_min));
        z += w;
        s1 += w * en;
        s2 += w * en * en;
    });
    return {s1 / z, s2 / z};
}

ParallelTempering::ParallelTempering(const WegnerModel &model, const BinaryVector &e, std::vector<double> betas,
                                     uint64_t seed)
    : betas_(std::move(betas)), rng_(stream_seed(seed, 0x7e3, 0)) {
    if (betas_.empty()) {
        throw std::invalid_argument("ParallelTempering: empty ladder");
    }
    for (size_t i = 0; i < betas_.size(); i++) {
        replicas_.emplace_back(model, e, betas_[i], stream_seed(seed, 0x7e3, i + 1));
        slot_.push_back(i);
    }
    swaps_accepted_.assign(betas_.size(), 0);
    swaps_tried_.assign(betas_.size(), 0);
}

void ParallelTempering::step() {
    for (size_t i = 0; i < betas_.size(); i++) {
        MetropolisSampler &r = replicas_[slot_[i]];
        r.set_beta(betas_[i]);
        r.sweep();
    }
    for (size_t i = 0; i + 1 < betas_.size(); i++) {
        double ei = replicas_[slot_[i]].energy();
        double ej = replicas_[slot_[i + 1]].energy();
        double arg = (betas_[i] - betas_[i + 1]) * (ei - ej);
        swaps_tried_[i]++;
        if (arg >= 0 || uniform01(rng_) < std::exp(arg)) {
            std::swap(slot_[i], slot_[i + 1]);
            swaps_accepted_[i]++;
        }
    }
}

double ParallelTempering::swap_rate(size_t i) const {
    return swaps_tried_[i] ? double(swaps_accepted_[i]) / double(swaps_tried_[i]) : 0;
}

std::vector<McEstimate> parallel_tempering_energies(const WegnerModel &model, const BinaryVector &e,
                                                    const std::vector<double> &betas, size_t sweeps, size_t burn_in,
                                                    uint64_t seed) {
    if (sweeps <= burn_in) {
        throw std::invalid_argument("parallel_tempering_energies: sweeps must exceed burn_in");
    }
    ParallelTempering pt(model, e, betas, seed);
    for (size_t i = 0; i < burn_in; i++) {
        pt.step();
    }
    std::vector<std::vector<double>> traces(betas.size());
    for (size_t s = burn_in; s < sweeps; s++) {
        pt.step();
        for (size_t i = 0; i < betas.size(); i++) {
            traces[i].push_back(pt.at(i).energy());
        }
    }
    std::vector<McEstimate> out;
    for (auto &t : traces) {
        out.push_back(blocked_estimate(t));
        out.back().burn_in = burn_in;
    }
    return out;
}

namespace {

struct Moments {
    double sa = 0, sb = 0, sab = 0;
    void add(double a, double b, double w) {
        sa += w * a;
        sb += w * b;
        sab += w * a * b;
    }
};

void fill_report(NishimoriReport &r, const std::vector<double> &q, const std::vector<double> &qp,
                 const std::vector<double> &qq) {
    size_t n = q.size();
    auto mean = [&](const std::vector<double> &v) {
        double s = 0;
        for (double x : v) {
            s += x;
        }
        return s / double(n);
    };
    auto err = [&](const std::vector<double> &v, double m) {
        double s = 0;
        for (double x : v) {
            s += (x - m) * (x - m);
        }
        return n > 1 ? std::sqrt(s / double(n - 1) / double(n)) : 0.0;
    };
    r.samples = n;
    r.q_beta = mean(q);
    r.q_beta_p = mean(qp);
    r.q_product = mean(qq);
    r.q_beta_err = err(q, r.q_beta);
    r.q_beta_p_err = err(qp, r.q_beta_p);
    r.q_product_err = err(qq, r.q_product);

    std::vector<double> gap(n);
    for (size_t i = 0; i < n; i++) {
        gap[i] = q[i] - qq[i];
    }
    r.identity_gap = mean(gap);
    r.identity_err = err(gap, r.identity_gap);

    // Delta method for [Q(β_p)] − [Q(β)]², keeping the covariance.
    double cov = 0;
    for (size_t i = 0; i < n; i++) {
        cov += (q[i] - r.q_beta) * (qp[i] - r.q_beta_p);
    }
    cov = n > 1 ? cov / double(n - 1) / double(n) : 0;
    double v = r.q_beta_p_err * r.q_beta_p_err + 4 * r.q_beta * r.q_beta * r.q_beta_err * r.q_beta_err -
               4 * r.q_beta * cov;
    r.inequality_margin = r.q_beta_p - r.q_beta * r.q_beta;
    r.inequality_err = std::sqrt(std::max(0.0, v));
}

}  // namespace

NishimoriReport nishimori_identity_exact(const CodeSector &sector, const BinaryVector &m, double p, double beta) {
    size_t nb = sector.num_bonds();
    if (nb > 24) {
        throw BudgetExceeded("nishimori_identity_exact: 2^" + std::to_string(nb) + " errors over budget");
    }
    NishimoriReport r;
    r.p = p;
    r.beta = beta;
    r.beta_p = nishimori_beta(p);
    Moments q;
    double lp = std::log(p), lq = std::log1p(-p);
    for (uint64_t bits = 0; bits < (uint64_t(1) << nb); bits++) {
        BinaryVector e(nb);
        for (size_t b = 0; b < nb; b++) {
            if ((bits >> b) & 1) {
                e.set(b, true);
            }
        }
        int w = std::popcount(bits);
        double prob = std::exp(w * lp + double(nb - w) * lq);
        double a = correlator_tot(sector, e, m, beta);
        double c = correlator_tot(sector, e, m, r.beta_p);
        q.add(a, c, prob);
    }
    r.samples = size_t(1) << nb;
    r.q_beta = q.sa;
    r.q_beta_p = q.sb;
    r.q_product = q.sab;
    r.identity_gap = r.q_beta - r.q_product;
    r.inequality_margin = r.q_beta_p - r.q_beta * r.q_beta;
    return r;
}

NishimoriReport nishimori_identity_check(const CodeSector &sector, const BinaryVector &m, double p, double beta,
                                         size_t samples, size_t sweeps, uint64_t seed) {
    if (samples < 2) {
        throw std::invalid_argument("nishimori_identity_check: need at least 2 disorder samples");
    }
    NishimoriReport r;
    r.p = p;
    r.beta = beta;
    r.beta_p = nishimori_beta(p);
    WegnerModel tot(nullspace(sector.check()));
    size_t nb = sector.num_bonds();
    ErrorModel em{p};
    std::vector<double> q(samples), qp(samples), qq(samples);
    for (size_t i = 0; i < samples; i++) {
        std::mt19937_64 rng(stream_seed(seed, i, 0));
        BinaryVector e = sample_error(em, nb, rng);
        size_t burn = sweeps / 5;
        McEstimate a = estimate_correlator(tot, e, m, beta, sweeps, stream_seed(seed, i, 1), burn);
        McEstimate c = estimate_correlator(tot, e, m, r.beta_p, sweeps, stream_seed(seed, i, 2), burn);
        q[i] = a.mean;
        qp[i] = c.mean;
        qq[i] = a.mean * c.mean;
    }
    fill_report(r, q, qp, qq);
    return r;
}

}  // namespace qecspin
