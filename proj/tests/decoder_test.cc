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

#include <gtest/gtest.h>

#include <cmath>

#include "qecspin/analysis.h"
#include "qecspin/runtime.h"

using namespace qecspin;

TEST(NishimoriBeta, formula_and_limits) {
    EXPECT_NEAR(nishimori_beta(0.1), 0.5 * std::log(9.0), 1e-15);
    EXPECT_NEAR(nishimori_beta(0.1), 1.09861, 1e-5);
    EXPECT_LT(nishimori_beta(0.4999999), 1e-6);
    EXPECT_GT(nishimori_beta(0.4999999), 0);
    EXPECT_NEAR(nishimori_beta(conjectured_pc()), 1.045228, 1e-6);
    EXPECT_THROW(nishimori_beta(0.5), std::domain_error);
    EXPECT_THROW(nishimori_beta(0.0), std::domain_error);
}

TEST(SampleError, frequency_and_seeding) {
    std::mt19937_64 zero_rng(1);
    EXPECT_TRUE(sample_error({0.0}, 500, zero_rng).is_zero());

    std::mt19937_64 rng(2);
    size_t ones = 0, total = 0;
    for (int i = 0; i < 1000; i++) {
        BinaryVector e = sample_error({0.2}, 100, rng);
        ones += e.weight();
        total += 100;
    }
    double f = double(ones) / double(total);
    double sigma = std::sqrt(0.2 * 0.8 / double(total));
    EXPECT_LT(std::abs(f - 0.2), 3 * sigma);

    std::mt19937_64 a(77), b(77);
    EXPECT_EQ(sample_error({0.3}, 64, a), sample_error({0.3}, 64, b));
    EXPECT_THROW(sample_error({0.7}, 4, a), std::domain_error);
}

TEST(MlDecode, clean_syndrome_prefers_trivial_class) {
    auto code = toric_code(2);
    for (Sector s : {Sector::kX, Sector::kZ, Sector::kFull}) {
        CodeSector cs(code, s);
        auto out = ml_decode(code, s, BinaryVector(cs.check().rows()), nishimori_beta(0.05));
        EXPECT_EQ(out.c_max, 0u);
        EXPECT_FALSE(out.tie);
        EXPECT_GT(out.p_succ_conditional, 0.5);
        EXPECT_LE(out.p_succ_conditional, 1.0);
    }
}

TEST(MlDecode, single_flip_on_distance_three) {
    auto code = toric_code(3);
    SectorDecoder dec(code, Sector::kX);
    double beta = nishimori_beta(0.05);
    for (size_t b = 0; b < dec.sector().num_bonds(); b++) {
        auto out = dec.decode_error(BinaryVector::unit(dec.sector().num_bonds(), b), beta);
        EXPECT_TRUE(out.success) << b;
        EXPECT_EQ(dec.sector().syndrome(out.correction), out.syndrome);
    }
}

TEST(MlDecode, no_logicals_always_succeeds) {
    auto code = new_css(BinaryMatrix::from_strings({"11"}), BinaryMatrix::from_strings({"11"}));
    SectorDecoder dec(code, Sector::kX);
    auto out = dec.decode_error(BinaryVector::from_string("10"), 1.0);
    EXPECT_TRUE(out.success);
    EXPECT_DOUBLE_EQ(out.p_succ_conditional, 1.0);
}

TEST(MlDecode, gauge_shift_gives_same_outcome) {
    auto code = toric_code(3);
    SectorDecoder dec(code, Sector::kX);
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; trial++) {
        BinaryVector e = sample_error({0.15}, dec.sector().num_bonds(), rng);
        BinaryVector shifted = e ^ dec.sector().theta().row(trial % dec.sector().theta().rows());
        auto a = dec.decode_error(e, 1.0);
        auto b = dec.decode_error(shifted, 1.0);
        EXPECT_EQ(a.success, b.success);
        EXPECT_NEAR(a.log_z_max, b.log_z_max, 1e-12);
        EXPECT_NEAR(a.log_z_tot, b.log_z_tot, 1e-12);
        EXPECT_EQ(a.correction, b.correction);
    }
}

TEST(MlDecode, even_distance_tie_is_broken_deterministically) {
    auto code = toric_code(2);
    SectorDecoder dec(code, Sector::kX);
    // one flip on a weight-2 logical: both completions weigh 1
    auto out = dec.decode_error(BinaryVector::unit(8, 0), 1.0);
    EXPECT_TRUE(out.tie);
    EXPECT_LE(out.p_succ_conditional, 0.5 + 1e-12);
    auto again = dec.decode_error(BinaryVector::unit(8, 0), 1.0);
    EXPECT_EQ(out.correction, again.correction);
}

TEST(Psucc, small_p_is_nearly_perfect) {
    auto code = toric_code(2);
    auto est = estimate_psucc(code, Sector::kX, 0.001, nishimori_beta(0.001), 10000, 5);
    EXPECT_GE(est.mean, 0.99);
    EXPECT_GT(est.stderr, 0);
}

TEST(Psucc, seeded_and_thread_independent) {
    auto code = toric_code(3);
    PsuccOptions one, many;
    many.threads = 3;
    std::vector<TrialRecord> r1, r3;
    one.sink = [&](const TrialRecord &r) { r1.push_back(r); };
    many.sink = [&](const TrialRecord &r) { r3.push_back(r); };
    auto a = estimate_psucc(code, Sector::kZ, 0.1, nishimori_beta(0.1), 200, 99, one);
    auto b = estimate_psucc(code, Sector::kZ, 0.1, nishimori_beta(0.1), 200, 99, many);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.zratio_mean, b.zratio_mean);
    ASSERT_EQ(r1.size(), r3.size());
    for (size_t i = 0; i < r1.size(); i++) {
        EXPECT_EQ(r1[i].seed, r3[i].seed);
        EXPECT_EQ(r1[i].success, r3[i].success);
    }
    EXPECT_THROW(estimate_psucc(code, Sector::kZ, 0.1, 1.0, 0, 1), std::invalid_argument);
}

TEST(Psucc, exhaustive_equals_sum_of_zmax) {
    auto code = toric_code(2);
    double p = 0.1;
    for (Sector s : {Sector::kX, Sector::kFull}) {
        double beta = nishimori_beta(p);
        EXPECT_NEAR(exhaustive_psucc(code, s, p, beta), sum_zmax_over_syndromes(code, s, beta), 1e-10);
    }
}

TEST(Psucc, sampled_matches_exhaustive) {
    auto code = toric_code(3);
    double p = 0.08, beta = nishimori_beta(p);
    double exact = exhaustive_psucc(code, Sector::kX, p, beta);
    auto est = estimate_psucc(code, Sector::kX, p, beta, 4000, 17);
    EXPECT_LT(std::abs(est.mean - exact), 3 * est.stderr);
    EXPECT_LT(std::abs(est.zratio_mean - exact), 3 * est.zratio_stderr + 3 * est.stderr);
}

TEST(Psucc, css_success_needs_both_sectors) {
    auto code = toric_code(2);
    auto both = estimate_psucc_css(code, 0.1, nishimori_beta(0.1), 2000, 3);
    auto x = estimate_psucc(code, Sector::kX, 0.1, nishimori_beta(0.1), 2000, 3);
    EXPECT_LT(both.mean, x.mean + 3 * x.stderr);
    EXPECT_GT(both.mean, 0.3);
}

TEST(Threshold, crossing_helper) {
    std::vector<double> p{0.1, 0.2, 0.3};
    auto c = curve_crossing(p, {0.8, 0.6, 0.4}, {0.9, 0.6, 0.2});
    ASSERT_TRUE(c.has_value());
    EXPECT_NEAR(*c, 0.2, 1e-12);
    auto mid = curve_crossing(p, {0.8, 0.6, 0.4}, {0.9, 0.7, 0.2});
    ASSERT_TRUE(mid.has_value());
    EXPECT_GT(*mid, 0.2);
    EXPECT_LT(*mid, 0.3);
    EXPECT_FALSE(curve_crossing(p, {0.5, 0.5, 0.5}, {0.9, 0.8, 0.7}).has_value());
}

TEST(Threshold, argument_errors) {
    std::vector<StabilizerCode> one{toric_code(2)};
    EXPECT_THROW(threshold_scan(one, {"L2"}, {0.1}, 10, 1), std::invalid_argument);
    std::vector<StabilizerCode> two{toric_code(2), toric_code(3)};
    EXPECT_THROW(threshold_scan(two, {"L2", "L3"}, {0.1}, 0, 1), std::invalid_argument);
}

TEST(Threshold, small_scan_shape) {
    std::vector<StabilizerCode> family{toric_code(2), toric_code(3)};
    auto scan = threshold_scan(family, {"L2", "L3"}, {0.02, 0.3}, 300, 4);
    ASSERT_EQ(scan.curves.size(), 2u);
    ASSERT_EQ(scan.curves[0].size(), 2u);
    // L3 wins at low p and loses near p = 0.3
    ASSERT_EQ(scan.crossings.size(), 1u);
    EXPECT_GT(scan.crossings[0], 0.02);
    EXPECT_LT(scan.crossings[0], 0.3);
}

TEST(Runtime, streams_and_parallel_for) {
    EXPECT_EQ(stream_seed(1, 2, 3), stream_seed(1, 2, 3));
    EXPECT_NE(stream_seed(1, 2, 3), stream_seed(1, 3, 2));
    std::vector<int> out(100, 0);
    parallel_for(out.size(), 4, [&](size_t i) { out[i] = int(i * i); });
    for (size_t i = 0; i < out.size(); i++) {
        EXPECT_EQ(out[i], int(i * i));
    }
    EXPECT_THROW(parallel_for(10, 2,
                              [](size_t i) {
                                  if (i == 7) {
                                      throw std::runtime_error("boom");
                                  }
                              }),
                 std::runtime_error);
}

TEST(Psucc, bad_trial_fraction_shrinks_with_size) {
    // well below threshold, trials with 1 − Z_max/Z_tot ≥ ε get rarer as the code grows
    double p = 0.05, eps = 0.1;
    std::vector<double> bad;
    for (size_t L : {2u, 3u, 4u}) {
        size_t count = 0, total = 0;
        PsuccOptions opt;
        opt.sink = [&](const TrialRecord &t) {
            total++;
            count += 1.0 - std::exp(t.log_z_max - t.log_z_tot) >= eps;
        };
        estimate_psucc(toric_code(L), Sector::kX, p, nishimori_beta(p), 2000, 55, opt);
        ASSERT_EQ(total, 2000u);
        bad.push_back(double(count) / double(total));
    }
    EXPECT_GT(bad[0], bad[1]) << bad[0] << " " << bad[1];
    EXPECT_GT(bad[1], bad[2]) << bad[1] << " " << bad[2];
}
