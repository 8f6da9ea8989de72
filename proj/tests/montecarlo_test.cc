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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "qecspin/decoder.h"
#include "qecspin/runtime.h"

using namespace qecspin;

namespace {

BinaryVector random_vector(size_t n, std::mt19937_64 &rng) {
    BinaryVector v(n);
    for (size_t i = 0; i < n; i++) {
        v.set(i, rng() & 1);
    }
    return v;
}

double exact_correlator(const WegnerModel &model, const BinaryVector &e, const BinaryVector &m, double beta) {
    auto num = evaluate(model, {e, m}, beta);
    auto den = evaluate(model, DisorderConfig::electric(e), beta);
    return num.sign * den.sign * std::exp(num.log_abs - den.log_abs);
}

}  // namespace

TEST(Metropolis, single_spin_magnetization) {
    // one spin on one bond: ⟨R⟩ = tanh β
    WegnerModel model(BinaryMatrix::from_strings({"1"}));
    for (double beta : {0.2, 0.8}) {
        auto est = estimate_correlator(model, BinaryVector(1), BinaryVector::from_string("1"), beta, 40000, 3, 100);
        EXPECT_LT(std::abs(est.mean - std::tanh(beta)), 4 * est.stderr + 1e-3) << beta;
    }
}

TEST(Metropolis, infinite_temperature_accepts_everything) {
    // L = 2 has bonds fixed to +1 (a spin hits them twice), so use L = 3
    auto code = toric_code(3);
    WegnerModel model(CodeSector(code, Sector::kX).theta());
    MetropolisSampler s(model, BinaryVector(model.num_bonds()), 0.0, 1);
    for (int i = 0; i < 50; i++) {
        s.sweep();
    }
    EXPECT_EQ(s.accepted(), s.attempted());
    auto est = estimate_energy_and_cv(model, BinaryVector(model.num_bonds()), 0.0, 4000, 2, 10);
    EXPECT_LT(std::abs(est.energy.mean), 4 * est.energy.stderr + 1e-2);
}

TEST(Metropolis, two_spin_boltzmann_ratio) {
    // bonds: σ1, σ1σ2 -> four states, histogram against exp(−βE)
    WegnerModel model(BinaryMatrix::from_strings({"11", "01"}));
    double beta = 0.6;
    MetropolisSampler s(model, BinaryVector(2), beta, 9);
    std::map<double, size_t> hist;
    for (int i = 0; i < 100; i++) {
        s.sweep();
    }
    size_t total = 200000;
    for (size_t i = 0; i < total; i++) {
        s.sweep();
        hist[s.energy()]++;
    }
    // E = −2 once, E = 0 twice, E = +2 once
    double w_low = std::exp(2 * beta), w_mid = 2.0, w_high = std::exp(-2 * beta);
    double zsum = w_low + w_mid + w_high;
    EXPECT_NEAR(double(hist[-2.0]) / double(total), w_low / zsum, 0.01);
    EXPECT_NEAR(double(hist[0.0]) / double(total), w_mid / zsum, 0.01);
    EXPECT_NEAR(double(hist[2.0]) / double(total), w_high / zsum, 0.01);
}

TEST(Metropolis, energy_and_heat_match_exact) {
    auto code = toric_code(3);
    WegnerModel model(CodeSector(code, Sector::kX).theta());
    std::mt19937_64 rng(4);
    BinaryVector e = random_vector(model.num_bonds(), rng);
    for (double beta : {0.3, 0.9}) {
        auto exact = exact_energy_moments(model, e, beta);
        auto mc = estimate_energy_and_cv(model, e, beta, 40000, 8);
        EXPECT_LT(std::abs(mc.energy.mean - exact.energy), 4 * mc.energy.stderr) << beta;
        EXPECT_LT(std::abs(mc.specific_heat.mean - exact.specific_heat(beta)), 4 * mc.specific_heat.stderr) << beta;
    }
    EXPECT_LT(exact_energy_moments(model, e, 0.01).specific_heat(0.01), 1e-2);
}

TEST(Metropolis, correlator_matches_exact) {
    auto code = toric_code(3);
    CodeSector cs(code, Sector::kX);
    WegnerModel model(cs.theta());
    std::mt19937_64 rng(21);
    BinaryVector e = sample_error({0.1}, model.num_bonds(), rng);
    // two adjacent bonds of a single plaquette-like row
    BinaryVector m = cs.check().row(0);
    double beta = 0.7;
    double exact = exact_correlator(model, e, m, beta);
    auto mc = estimate_correlator(model, e, m, beta, 40000, 6);
    EXPECT_LT(std::abs(mc.mean - exact), 4 * mc.stderr + 1e-3);
}

TEST(Metropolis, trivial_and_dual_codeword_observables) {
    auto code = toric_code(3);
    CodeSector cs(code, Sector::kX);
    WegnerModel model(cs.theta());
    std::mt19937_64 rng(2);
    BinaryVector e = random_vector(model.num_bonds(), rng);
    auto zero = estimate_correlator(model, e, BinaryVector(model.num_bonds()), 0.5, 500, 1, 10);
    EXPECT_EQ(zero.mean, 1.0);
    // a row of the check matrix is orthogonal to every Θ row: its bond product is a constant sign
    BinaryVector m = cs.check().row(2);
    auto run = metropolis_run(model, e, 0.5, 300, 10, 1, &m);
    int sign = (e.dot(m)) ? -1 : 1;
    for (double v : run.trace.observable) {
        EXPECT_EQ(v, sign);
    }
}

TEST(Metropolis, seeded_and_consistent) {
    auto code = toric_code(3);
    WegnerModel model(CodeSector(code, Sector::kZ).theta());
    BinaryVector e = BinaryVector::unit(model.num_bonds(), 3);
    auto a = metropolis_run(model, e, 0.8, 500, 20, 42);
    auto b = metropolis_run(model, e, 0.8, 500, 20, 42);
    EXPECT_EQ(a.trace.energy, b.trace.energy);
    auto c = metropolis_run(model, e, 0.8, 500, 20, 43);
    EXPECT_NE(a.trace.energy, c.trace.energy);
    EXPECT_NO_THROW(a.sampler.check_consistency());

    std::ostringstream csv;
    a.trace.write_csv(csv);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "sweep,energy,observable");
}

TEST(Blocking, white_noise_estimate) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(2.0, 1.0);
    std::vector<double> x(32000);
    for (auto &v : x) {
        v = g(rng);
    }
    auto est = blocked_estimate(x);
    EXPECT_LT(std::abs(est.mean - 2.0), 4 * est.stderr);
    EXPECT_NEAR(est.stderr, 1.0 / std::sqrt(32000.0), 0.5 / std::sqrt(32000.0));
    EXPECT_LT(est.tau, 2.0);
}

TEST(ParallelTempering, ladder_energies) {
    auto code = toric_code(3);
    WegnerModel model(CodeSector(code, Sector::kX).theta());
    BinaryVector e(model.num_bonds());
    std::vector<double> betas{0.3, 0.5, 0.7, 0.9};
    auto est = parallel_tempering_energies(model, e, betas, 20000, 500, 12);
    ASSERT_EQ(est.size(), betas.size());
    for (size_t i = 0; i < betas.size(); i++) {
        double exact = exact_energy_moments(model, e, betas[i]).energy;
        EXPECT_LT(std::abs(est[i].mean - exact), 4 * est[i].stderr + 1e-3) << betas[i];
    }
    ParallelTempering pt(model, e, betas, 3);
    for (int i = 0; i < 200; i++) {
        pt.step();
    }
    EXPECT_GT(pt.swap_rate(0), 0.0);
    EXPECT_LE(pt.swap_rate(0), 1.0);
}

TEST(Nishimori, exact_identity_on_small_toric) {
    auto code = toric_code(2);
    for (Sector s : {Sector::kX, Sector::kZ}) {
        CodeSector cs(code, s);
        BinaryVector m = cs.dual_logicals().row(0);
        for (double beta : {0.4, 1.5}) {
            auto r = nishimori_identity_exact(cs, m, 0.1, beta);
            EXPECT_NEAR(r.identity_gap, 0.0, 1e-10);
            EXPECT_GE(r.inequality_margin, -1e-10);
        }
    }
}

TEST(Nishimori, sampled_identity_within_noise) {
    auto code = toric_code(2);
    CodeSector cs(code, Sector::kX);
    BinaryVector m = cs.dual_logicals().row(0);
    auto r = nishimori_identity_check(cs, m, 0.1, 0.7, 150, 1000, 11);
    EXPECT_EQ(r.samples, 150u);
    EXPECT_LT(std::abs(r.identity_z()), 4.0);
    EXPECT_GT(r.inequality_z(), -4.0);
}

TEST(Metropolis, nishimori_line_bond_energy) {
    // on the Nishimori line the averaged bond value is tanh β_p, whatever the lattice
    double p = 0.08, beta = nishimori_beta(p);
    WegnerModel model(CodeSector(toric_code(3), Sector::kX).theta());
    size_t samples = 200;
    std::vector<double> u(samples);
    for (size_t i = 0; i < samples; i++) {
        std::mt19937_64 rng(stream_seed(77, i));
        BinaryVector e = sample_error({p}, model.num_bonds(), rng);
        u[i] = -estimate_energy_and_cv(model, e, beta, 4000, stream_seed(78, i), 200).energy.mean /
               double(model.num_bonds());
    }
    double mean = 0, var = 0;
    for (double x : u) {
        mean += x;
    }
    mean /= double(samples);
    for (double x : u) {
        var += (x - mean) * (x - mean);
    }
    double err = std::sqrt(var / double(samples - 1) / double(samples));
    EXPECT_LT(std::abs(mean - std::tanh(beta)), 3 * err) << mean << " vs " << std::tanh(beta);
}

TEST(Metropolis, random_small_models_match_enumeration) {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 20; trial++) {
        size_t ns = 2 + rng() % 11, nb = 3 + rng() % 12;
        BinaryMatrix theta(ns, nb);
        for (size_t r = 0; r < ns; r++) {
            for (size_t b = 0; b < nb; b++) {
                theta.set(r, b, rng() % 3 == 0);
            }
        }
        WegnerModel model(theta);
        BinaryVector e = random_vector(nb, rng);
        double beta = 0.2 + 0.1 * double(trial % 8);
        auto exact = exact_energy_moments(model, e, beta);
        auto mc = estimate_energy_and_cv(model, e, beta, 20000, stream_seed(20, trial), 200);
        // a frozen energy (every bond constant) has zero error bar
        EXPECT_LE(std::abs(mc.energy.mean - exact.energy), 3 * mc.energy.stderr + 1e-9) << trial;
    }
}
