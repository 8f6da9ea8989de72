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

#include <gtest/gtest.h>

#include <array>
#include <bit>
#include <cmath>
#include <random>

#include "qecspin/decoder.h"

using namespace qecspin;

namespace {

BinaryVector random_vector(size_t n, std::mt19937_64 &rng) {
    BinaryVector v(n);
    for (size_t i = 0; i < n; i++) {
        v.set(i, rng() & 1);
    }
    return v;
}

WegnerModel random_model(std::mt19937_64 &rng, bool uniform) {
    size_t ns = 1 + rng() % 10, nb = 2 + rng() % 12;
    BinaryMatrix theta(ns, nb);
    for (size_t r = 0; r < ns; r++) {
        for (size_t b = 0; b < nb; b++) {
            theta.set(r, b, rng() % 3 == 0);
        }
    }
    std::vector<double> j(nb, 1.0);
    if (!uniform) {
        std::uniform_real_distribution<double> u(0.3, 1.7);
        for (auto &x : j) {
            x = u(rng);
        }
    }
    return WegnerModel(theta, j);
}

// Σ_σ Π_b exp(K_b (−1)^{e_b} R_b) R_b^{m_b} / Π 2cosh K_b / 2^{N_g}, straight from the definition.
double brute_force(const WegnerModel &model, const DisorderConfig &d, double beta) {
    size_t ns = model.num_spins(), nb = model.num_bonds();
    double total = 0;
    for (uint64_t sigma = 0; sigma < (uint64_t{1} << ns); sigma++) {
        double term = 1;
        for (size_t b = 0; b < nb; b++) {
            int r = 1;
            for (size_t s = 0; s < ns; s++) {
                if (((sigma >> s) & 1) && model.theta().get(s, b)) {
                    r = -r;
                }
            }
            double k = beta * model.couplings()[b];
            int eb = d.e.get(b) ? -1 : 1;
            term *= std::exp(k * eb * r) / (2 * std::cosh(k));
            if (d.m.get(b)) {
                term *= r;
            }
        }
        total += term;
    }
    return total / std::ldexp(1.0, int(model.degeneracy()));
}

double rel(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST(Evaluators, single_bond_is_one) {
    WegnerModel m(BinaryMatrix::from_strings({"1"}));
    for (double beta : {0.1, 0.7, 3.0}) {
        EXPECT_NEAR(eval_spin_enum(m, DisorderConfig::clean(1), beta).value(), 1.0, 1e-14);
        EXPECT_NEAR(eval_coset_enum(m, BinaryVector(1), beta).value(), 1.0, 1e-14);
    }
}

TEST(Evaluators, three_spin_ring_matches_definition) {
    WegnerModel ring(circulant("11", 3));
    for (double beta : {0.2, 0.44, 1.1}) {
        DisorderConfig clean = DisorderConfig::clean(3);
        double direct = brute_force(ring, clean, beta);
        // closed form: (e^{3β} + 3e^{−β}) · 2 / (2cosh β)³ / 2
        double closed = (std::exp(3 * beta) + 3 * std::exp(-beta)) / std::pow(2 * std::cosh(beta), 3);
        EXPECT_NEAR(direct, closed, 1e-14);
        EXPECT_NEAR(eval_spin_enum(ring, clean, beta).value(), closed, 1e-14);
    }
}

TEST(Evaluators, spin_and_coset_agree_on_random_models) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; trial++) {
        WegnerModel m = random_model(rng, trial % 2 == 0);
        BinaryVector e = random_vector(m.num_bonds(), rng);
        BinaryVector mm = trial % 3 == 0 ? random_vector(m.num_bonds(), rng) : BinaryVector(m.num_bonds());
        double beta = std::array<double, 3>{0.2, 0.44, 1.1}[trial % 3];
        DisorderConfig d{e, mm};
        double spin = eval_spin_enum(m, d, beta).value();
        double coset = eval_coset_enum(m, d, beta).value();
        double brute = brute_force(m, d, beta);
        // signed sums can cancel to zero; compare on the scale of the unsigned sum
        double scale = brute_force(m, DisorderConfig::electric(e), beta);
        EXPECT_LT(std::abs(spin - brute), 1e-12 * scale) << trial;
        EXPECT_LT(std::abs(coset - brute), 1e-12 * scale) << trial;
    }
}

TEST(Evaluators, gauge_invariance_and_identity_insertion) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 20; trial++) {
        WegnerModel m = random_model(rng, true);
        BinaryVector sigma = random_vector(m.num_spins(), rng);
        BinaryVector shift = m.theta().combine_rows(sigma);
        double base = eval_coset_enum(m, BinaryVector(m.num_bonds()), 0.8).value();
        EXPECT_LT(rel(eval_coset_enum(m, shift, 0.8).value(), base), 1e-12);

        BinaryMatrix ker = nullspace(m.theta());
        if (ker.rows() == 0) {
            continue;
        }
        BinaryVector inert = ker.row(0);
        BinaryVector e = random_vector(m.num_bonds(), rng);
        double plain = eval_spin_enum(m, DisorderConfig::electric(e), 0.8).value();
        EXPECT_LT(rel(eval_spin_enum(m, DisorderConfig{e, inert}, 0.8).value(), plain), 1e-12);
    }
}

TEST(Evaluators, clean_value_grows_toward_one_at_low_temperature) {
    WegnerModel m(toric_code(2).gx());
    double prev = 0;
    for (double beta : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        double v = eval_coset_enum(m, BinaryVector(m.num_bonds()), beta).value();
        EXPECT_GT(v, prev);
        prev = v;
    }
    EXPECT_NEAR(prev, 1.0, 1e-5);
}

TEST(Evaluators, budgets_throw) {
    WegnerModel big(BinaryMatrix::identity(30));
    EXPECT_THROW(eval_spin_enum(big, DisorderConfig::clean(30), 1.0), BudgetExceeded);
    EXPECT_THROW(eval_coset_enum(big, BinaryVector(30), 1.0, 20), BudgetExceeded);
}

TEST(Sectors, total_is_normalized_over_syndromes) {
    auto code = toric_code(2);
    for (Sector s : {Sector::kX, Sector::kZ, Sector::kFull}) {
        CodeSector cs(code, s);
        auto pivots = rref(cs.check()).pivots;
        for (double p : {0.05, 0.1, 0.2}) {
            double beta = nishimori_beta(p);
            double sum = 0;
            BinaryVector e(cs.num_bonds());
            for (uint64_t i = 0; i < (uint64_t{1} << pivots.size()); i++) {
                if (i) {
                    e.flip(pivots[std::countr_zero(i)]);
                }
                sum += ztot(cs, e, beta).value();
            }
            EXPECT_NEAR(sum, 1.0, 1e-10) << sector_name(s) << " p=" << p;
        }
    }
}

TEST(Sectors, nishimori_map_gives_coset_probability) {
    auto code = toric_code(2);
    CodeSector cs(code, Sector::kX);
    WegnerModel model(cs.theta());
    std::mt19937_64 rng(4);
    double p = 0.1;
    for (int trial = 0; trial < 100; trial++) {
        BinaryVector e = sample_error({0.3}, cs.num_bonds(), rng);
        double prob = 0;
        BinaryVector x = e;
        const auto &basis = model.basis();
        for (uint64_t g = 0; g < (uint64_t{1} << basis.size()); g++) {
            if (g) {
                x ^= basis[std::countr_zero(g)];
            }
            size_t w = x.weight();
            prob += std::pow(p, double(w)) * std::pow(1 - p, double(cs.num_bonds() - w));
        }
        EXPECT_NEAR(z0(cs, e, nishimori_beta(p)).value(), prob, 1e-12 * prob + 1e-300);
    }
}

TEST(Sectors, class_sums_and_max) {
    auto code = toric_code(3);
    CodeSector cs(code, Sector::kX);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; trial++) {
        BinaryVector e = sample_error({0.15}, cs.num_bonds(), rng);
        double beta = 0.9;
        ZMax best = zmax(cs, e, beta);
        double total = 0;
        for (uint64_t c = 0; c < 4; c++) {
            double v = zc(cs, e, c, beta).value();
            total += v;
            EXPECT_GE(best.value.value(), v * (1 - 1e-12));
        }
        EXPECT_NEAR(ztot(cs, e, beta).value(), total, 1e-12 * total);
    }
}

TEST(Histograms, toric_two_clean) {
    CodeSector cs(toric_code(2), Sector::kX);
    ClassHistograms h = class_histograms(cs, BinaryVector(8));
    std::vector<int64_t> c0(h.counts(0).begin(), h.counts(0).end());
    EXPECT_EQ(c0, (std::vector<int64_t>{1, 0, 0, 0, 6, 0, 0, 0, 1}));
    EXPECT_EQ(h.min_weight(0), 0u);
    EXPECT_EQ(h.min_weight(1), 2u);
    EXPECT_EQ(h.min_weight(2), 2u);
    EXPECT_EQ(h.min_weight(3), 4u);
    int64_t total = 0;
    for (uint64_t c = 0; c < 4; c++) {
        for (int64_t v : h.counts(c)) {
            total += v;
        }
    }
    EXPECT_EQ(total, 32);
}

TEST(Duality, self_dual_coupling) {
    WegnerModel m(circulant("11", 4));
    double beta = 0.5 * std::log(1 + std::sqrt(2.0));
    WegnerModel d = dual_model(m, beta);
    for (double k : d.couplings()) {
        EXPECT_NEAR(k, beta, 1e-12);
    }
}

TEST(Duality, identity_on_random_models) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; trial++) {
        WegnerModel m = random_model(rng, trial % 2 == 0);
        BinaryVector e = random_vector(m.num_bonds(), rng);
        BinaryVector mm = random_vector(m.num_bonds(), rng);
        double beta = 0.3 + 0.1 * double(trial % 7);
        double lhs = eval_spin_enum(m, DisorderConfig{e, mm}, beta).value();
        WegnerModel d = dual_model(m, beta);
        PartitionValue dual = eval_coset_enum(d, DisorderConfig{mm, e}, 1.0);
        double sign = e.dot(mm) ? -1 : 1;
        double rhs = sign * std::exp(duality_log_factor(m, beta)) * dual.value();
        EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs))) << trial;
    }
}

TEST(Duality, double_dual_preserves_values) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 10; trial++) {
        WegnerModel m = random_model(rng, false);
        double beta = 0.7;
        WegnerModel dd = dual_model(dual_model(m, beta), 1.0);
        BinaryVector e = random_vector(m.num_bonds(), rng);
        double a = eval_coset_enum(m, e, beta).value();
        double b = eval_coset_enum(dd, e, 1.0).value();
        EXPECT_LT(rel(a, b), 1e-10);
    }
}

TEST(Duality, evaluate_routes_agree) {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; trial++) {
        WegnerModel m = random_model(rng, true);
        DisorderConfig d = DisorderConfig::clean(m.num_bonds());
        double spin = eval_spin_enum(m, d, 0.6).value();
        size_t dual_rank = m.num_bonds() - m.rank();
        if (dual_rank >= m.rank()) {
            continue;
        }
        // only the dual walk fits this budget
        EXPECT_LT(rel(evaluate(m, d, 0.6, EnumBudget{0, dual_rank}).value(), spin), 1e-10);
    }
}

TEST(Correlators, trivial_and_dual_codewords) {
    CodeSector cs(toric_code(2), Sector::kX);
    std::mt19937_64 rng(7);
    BinaryVector e = sample_error({0.2}, 8, rng);
    EXPECT_DOUBLE_EQ(correlator_tot(cs, e, BinaryVector(8), 0.7), 1.0);
    EXPECT_DOUBLE_EQ(correlator_c(cs, e, 1, BinaryVector(8), 0.7), 1.0);
    for (size_t j = 0; j < cs.dual_logicals().rows(); j++) {
        for (uint64_t c = 0; c < 4; c++) {
            EXPECT_NEAR(correlator_c(cs, e, c, cs.dual_logicals().row(j), 0.7), 1.0, 1e-12);
        }
    }
}

TEST(GroundStates, cyclic_seven_has_nine_dimensional_degeneracy) {
    // each circulant of 1+x+x³ on 7 has a 3-dimensional kernel: N_g = 3·3 in both sectors
    auto code = cyclic_hp("1101", 7, "1101", 7);
    for (Sector s : {Sector::kX, Sector::kZ}) {
        WegnerModel model(CodeSector(code, s).theta());
        EXPECT_EQ(model.degeneracy(), 9u);
    }
    WegnerModel dt(CodeSector(debierre_turban(3, 6, 3), Sector::kX).theta());
    EXPECT_EQ(dt.degeneracy(), 2u);
}

TEST(Correlators, wilson_loop_area_then_perimeter) {
    // clean gauge sector: bonds are plaquettes, spins are links (four plaquettes each)
    auto code = gauge_code(toric_code(2), 2);
    CodeSector cs(code, Sector::kZ);
    WegnerModel model(cs.theta());
    BinaryMatrix closed = nullspace(cs.theta());
    size_t nb = cs.num_bonds();
    // grow a surface one plaquette at a time, keeping the boundary short
    std::vector<BinaryVector> surfaces;
    BinaryVector m(nb);
    for (size_t area = 1; area <= 4; area++) {
        size_t best = nb, best_p = nb + 1;
        for (size_t b = 0; b < nb; b++) {
            if (m.get(b)) {
                continue;
            }
            BinaryVector t = m;
            t.set(b, true);
            size_t p = cs.theta().apply(t).weight();
            if (coset_min_weight(t, closed).weight == area && p < best_p) {
                best = b;
                best_p = p;
            }
        }
        ASSERT_LT(best, nb);
        m.set(best, true);
        surfaces.push_back(m);
    }
    // areas 1, 2, 4 share boundary length 4
    std::vector<BinaryVector> loops{surfaces[0], surfaces[1], surfaces[3]};
    for (const auto &l : loops) {
        ASSERT_EQ(cs.theta().apply(l).weight(), 4u);
    }
    auto minus_log_q = [&](const BinaryVector &l, double beta) {
        auto num = evaluate(model, {BinaryVector(nb), l}, beta);
        auto den = evaluate(model, DisorderConfig::clean(nb), beta);
        EXPECT_EQ(num.sign, 1);
        return den.log_abs - num.log_abs;
    };
    double hot = 0.01, cold = 2.5;
    std::vector<double> q_hot, q_cold;
    for (const auto &l : loops) {
        q_hot.push_back(minus_log_q(l, hot));
        q_cold.push_back(minus_log_q(l, cold));
    }
    for (size_t i = 0; i < 3; i++) {
        size_t area = i == 2 ? 4 : i + 1;
        // leading order tanh(β)^area, up to the count of minimal surfaces
        EXPECT_NEAR(q_hot[i] / (double(area) * -std::log(std::tanh(hot))), 1.0, 0.15) << i;
        if (i > 0) {
            EXPECT_GT(q_hot[i], q_hot[i - 1]);
            EXPECT_GT(q_cold[i], q_cold[i - 1]);
        }
    }
    // quadrupling the area at fixed boundary: roughly ×4 when hot, well under ×2 when cold
    EXPECT_GT(q_hot[2] / q_hot[0], 3.0);
    EXPECT_LT(q_cold[2] / q_cold[0], 2.0);
}
