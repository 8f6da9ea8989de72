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

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "qecspin/code_io.h"

using namespace qecspin;

namespace {

BinaryVector random_vector(size_t n, std::mt19937_64 &rng) {
    BinaryVector v(n);
    for (size_t i = 0; i < n; i++) {
        v.set(i, rng() & 1);
    }
    return v;
}

}  // namespace

TEST(StabilizerCode, generator_validation) {
    auto ok = new_stabilizer(BinaryMatrix::from_strings({"1100", "0011"}));
    EXPECT_EQ(ok.n(), 2u);
    EXPECT_EQ(ok.k(), 0u);

    try {
        new_stabilizer(BinaryMatrix::from_strings({"1000", "0010"}));
        FAIL() << "anticommuting rows accepted";
    } catch (const std::invalid_argument &ex) {
        EXPECT_NE(std::string(ex.what()).find("0"), std::string::npos);
    }

    auto toric = toric_code(2);
    auto again = new_stabilizer(toric.generators());
    EXPECT_EQ(again.k(), 2u);
}

TEST(StabilizerCode, css_examples) {
    auto a = new_css(BinaryMatrix::from_strings({"11"}), BinaryMatrix(0, 2));
    EXPECT_EQ(a.k(), 1u);
    auto b = new_css(BinaryMatrix::from_strings({"11"}), BinaryMatrix::from_strings({"11"}));
    EXPECT_EQ(b.k(), 0u);
    EXPECT_THROW(new_css(BinaryMatrix::from_strings({"10"}), BinaryMatrix::from_strings({"11"})),
                 std::invalid_argument);
    EXPECT_TRUE(a.is_css());
    EXPECT_EQ(a.generators().cols(), 4u);
}

TEST(StabilizerCode, generators_commute_and_k_formula) {
    for (const auto &code : {toric_code(3), debierre_turban(3, 6, 3), cyclic_hp("1101", 7, "1101", 7)}) {
        const BinaryMatrix &g = code.generators();
        for (size_t i = 0; i < g.rows(); i++) {
            for (size_t j = i + 1; j < g.rows(); j++) {
                ASSERT_FALSE(trace_inner(g.row(i), g.row(j)));
            }
        }
        EXPECT_EQ(code.k(), code.n() - rank(code.gx()) - rank(code.gz()));
        EXPECT_EQ(code.k(), code.n() - code.rank());
    }
}

TEST(HypergraphProduct, toric_parameters) {
    for (size_t L : {2u, 3u, 4u}) {
        auto code = toric_code(L);
        auto p = distance(code);
        EXPECT_EQ(p.n, 2 * L * L);
        EXPECT_EQ(p.k, 2u);
        EXPECT_EQ(p.d, L);
        EXPECT_TRUE(p.d_exact);
    }
    auto hp = hp_code(circulant("11", 3), circulant("11", 3));
    EXPECT_EQ(hp.n(), 18u);
    EXPECT_EQ(hp.k(), 2u);
    auto cyc = cyclic_hp("11", 2, "11", 2);
    EXPECT_EQ(cyc.n(), 8u);
    EXPECT_EQ(cyc.k(), 2u);
}

// 1+x+x³ divides x⁷−1, so both circulants have rank 4 and a 3-dimensional kernel on each
// side: k = 2·3·3 = 18 for n = 49 + 49. Distance 4 is the minimum over the two seeds.
TEST(HypergraphProduct, cyclic_seven_parameters) {
    auto code = cyclic_hp("1101", 7, "1101", 7);
    auto p = distance(code, 4);
    EXPECT_EQ(p.n, 98u);
    EXPECT_EQ(p.k, 18u);
    EXPECT_EQ(p.d, 4u);
    EXPECT_TRUE(p.d_exact);
    auto rev = cyclic_hp("1011", 7, "1011", 7);
    EXPECT_EQ(rev.k(), 18u);
}

TEST(HypergraphProduct, debierre_turban_family) {
    auto code = debierre_turban(3, 6, 3);
    EXPECT_EQ(code.n(), 36u);
    EXPECT_EQ(code.k(), 4u);
    auto same = cyclic_hp("11", 3, "111", 6);
    EXPECT_EQ(same.generators(), code.generators());
}

TEST(GaugeCode, valid_and_shaped) {
    auto inner = toric_code(2);
    size_t L = 2;
    auto code = gauge_code(inner, L);
    size_t ns = inner.num_generators();
    size_t nb = inner.generators().cols();
    EXPECT_TRUE(code.is_css());
    EXPECT_EQ(code.n(), L * nb + L * ns);
    EXPECT_EQ(code.gx().rows(), L * ns);
    EXPECT_EQ(code.gz().rows(), L * nb + L * ns);
    for (size_t r = 0; r < code.gx().rows(); r++) {
        EXPECT_EQ(code.gx().row(r).weight(), inner.generators().row(r % ns).weight() + 2);
    }
    auto code3 = gauge_code(toric_code(2), 3);
    EXPECT_TRUE((code3.gx() * code3.gz().transpose()).is_zero());
}

TEST(Gallager, degrees_and_determinism) {
    auto h = gallager_ldpc(2, 3, 6, 1);
    EXPECT_EQ(h.rows(), 9u);
    EXPECT_EQ(h.cols(), 6u);
    for (size_t r = 0; r < h.rows(); r++) {
        EXPECT_EQ(h.row(r).weight(), 2u);
    }
    for (size_t c = 0; c < h.cols(); c++) {
        EXPECT_EQ(h.column(c).weight(), 3u);
    }
    EXPECT_EQ(gallager_ldpc(2, 3, 6, 1), h);

    auto t = gallager_ldpc(2, 3, 6, 1, GallagerLayout::kColumnWeightH);
    EXPECT_EQ(t.rows(), 4u);
    for (size_t c = 0; c < t.cols(); c++) {
        EXPECT_EQ(t.column(c).weight(), 2u);
    }
    EXPECT_THROW(gallager_ldpc(3, 2, 6, 1), std::invalid_argument);
    EXPECT_THROW(gallager_ldpc(2, 3, 7, 1, GallagerLayout::kColumnWeightH), std::invalid_argument);
}

TEST(Gallager, product_rate_bound) {
    double bound = 1.0 / 13.0;  // (v−h)²/(h²+v²) at (2,3)
    for (auto layout : {GallagerLayout::kRowWeightH, GallagerLayout::kColumnWeightH}) {
        for (uint64_t seed : {1u, 2u, 3u}) {
            auto h = gallager_ldpc(2, 3, 6, seed, layout);
            auto code = hp_code(h, h.transpose());
            EXPECT_GE(double(code.k()) / double(code.n()), bound);
        }
    }
}

TEST(Syndrome, zero_rows_and_direct_count) {
    auto code = toric_code(3);
    size_t n2 = 2 * code.n();
    EXPECT_TRUE(syndrome(code, BinaryVector(n2)).is_zero());
    for (size_t r = 0; r < code.num_generators(); r++) {
        EXPECT_TRUE(syndrome(code, code.generators().row(r)).is_zero());
    }
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; trial++) {
        BinaryVector e = random_vector(n2, rng);
        BinaryVector s = syndrome(code, e);
        for (size_t r = 0; r < code.num_generators(); r++) {
            EXPECT_EQ(s.get(r), trace_inner(code.generators().row(r), e));
        }
    }
}

TEST(CodeSector, class_structure) {
    auto code = toric_code(2);
    for (Sector s : {Sector::kX, Sector::kZ, Sector::kFull}) {
        CodeSector cs(code, s);
        size_t expect = s == Sector::kFull ? 4 : 2;
        ASSERT_EQ(cs.num_logicals(), expect);
        for (size_t i = 0; i < cs.num_logicals(); i++) {
            EXPECT_TRUE(cs.syndrome(cs.logicals().row(i)).is_zero());
            for (size_t j = 0; j < cs.num_logicals(); j++) {
                EXPECT_EQ(cs.logicals().row(i).dot(cs.dual_logicals().row(j)), i == j);
            }
            EXPECT_EQ(cs.class_of(cs.logicals().row(i)), uint64_t{1} << i);
        }
        // adding a degeneracy row keeps the class
        BinaryVector c = cs.class_vector(1) ^ cs.theta().row(0);
        EXPECT_EQ(cs.class_of(c), 1u);
    }
}

TEST(CodeSector, error_for_syndrome_round_trip) {
    auto code = toric_code(3);
    CodeSector cs(code, Sector::kX);
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 20; trial++) {
        BinaryVector e = random_vector(cs.num_bonds(), rng);
        auto es = cs.error_for_syndrome(cs.syndrome(e));
        ASSERT_TRUE(es.has_value());
        EXPECT_EQ(cs.syndrome(*es), cs.syndrome(e));
    }
}

TEST(CodewordClasses, counts_and_representatives) {
    auto toric = codeword_classes(toric_code(2), Sector::kZ);
    EXPECT_EQ(toric.basis.rows(), 2u);
    ASSERT_TRUE(toric.representatives.has_value());
    EXPECT_EQ(toric.representatives->size(), 4u);
    EXPECT_EQ(toric.min_weights[0], 0u);
    EXPECT_EQ(toric.min_weights[1], 2u);

    auto trivial = codeword_classes(new_css(BinaryMatrix::from_strings({"11"}), BinaryMatrix::from_strings({"11"})),
                                    Sector::kX);
    EXPECT_EQ(trivial.basis.rows(), 0u);
    EXPECT_EQ(trivial.representatives->size(), 1u);

    auto big = codeword_classes(cyclic_hp("1101", 7, "1101", 7), Sector::kX, 6);
    EXPECT_EQ(big.basis.rows(), 18u);
    EXPECT_FALSE(big.representatives.has_value());
}

TEST(Distance, conventions) {
    auto none = distance(new_css(BinaryMatrix::from_strings({"11"}), BinaryMatrix::from_strings({"11"})));
    EXPECT_EQ(none.k, 0u);
    EXPECT_EQ(none.d, kInfiniteDistance);
    EXPECT_EQ(none.str(), "[[2,0,inf]]");
    EXPECT_EQ(distance(toric_code(3)).str(), "[[18,2,3]]");
    auto full = sector_distance(toric_code(2), Sector::kFull);
    EXPECT_EQ(full.d, 2u);
}

TEST(CodeIo, json_round_trip) {
    for (const auto &code : {toric_code(3), new_stabilizer(toric_code(2).generators())}) {
        auto j = code_to_json(code);
        EXPECT_EQ(j["format"], "qecspin-code/1");
        auto back = code_from_json(j);
        EXPECT_EQ(back.generators(), code.generators());
        EXPECT_EQ(back.is_css(), code.is_css());
        EXPECT_EQ(back.k(), code.k());
    }
    auto path = std::filesystem::temp_directory_path() / "qecspin_code_io_test.json";
    save_code(toric_code(2), path.string());
    auto loaded = load_code(path.string());
    EXPECT_EQ(loaded.n(), 8u);
    std::filesystem::remove(path);
    EXPECT_THROW(code_from_json(nlohmann::json{{"format", "other"}}), std::invalid_argument);
}
