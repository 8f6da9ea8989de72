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

#ifndef QECSPIN_CODES_H
#define QECSPIN_CODES_H

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qecspin/gf2.h"

namespace qecspin {

/// Which half of the decoding problem we look at. kFull is the general (v|u) picture
/// with N_b = 2n bonds; kX / kZ are the CSS sectors with N_b = n.
/// kX: degeneracy generated by G_X, syndrome s = G_Z eᵀ.
enum class Sector { kFull, kX, kZ };

std::string sector_name(Sector s);
Sector parse_sector(const std::string &name);

class StabilizerCode {
   public:
    /// Validates that all generator rows commute (zero trace inner product).
    static StabilizerCode from_generators(BinaryMatrix g, std::string name = "");
    /// Validates G_X G_Zᵀ = 0. Either matrix may have zero rows.
    static StabilizerCode css(BinaryMatrix gx, BinaryMatrix gz, std::string name = "");

    size_t n() const { return n_; }
    size_t k() const { return k_; }
    size_t rank() const { return rank_; }
    /// N_s, the number of generator rows.
    size_t num_generators() const { return g_.rows(); }
    /// N_g = N_s − rank G.
    size_t degeneracy() const { return g_.rows() - rank_; }

    const BinaryMatrix &generators() const { return g_; }
    bool is_css() const { return css_; }
    const BinaryMatrix &gx() const;
    const BinaryMatrix &gz() const;

    const std::string &name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }
    std::map<std::string, std::string> &metadata() { return metadata_; }
    const std::map<std::string, std::string> &metadata() const { return metadata_; }

   private:
    StabilizerCode() = default;

    size_t n_ = 0;
    size_t k_ = 0;
    size_t rank_ = 0;
    bool css_ = false;
    BinaryMatrix g_;
    BinaryMatrix gx_;
    BinaryMatrix gz_;
    std::string name_;
    std::map<std::string, std::string> metadata_;
};

StabilizerCode new_stabilizer(const BinaryMatrix &g);
StabilizerCode new_css(const BinaryMatrix &gx, const BinaryMatrix &gz);

/// G_X = (E_{r2}⊗H1, H2⊗E_{r1}),  G_Z = (H2ᵀ⊗E_{n1}, E_{n2}⊗H1ᵀ).
StabilizerCode hp_code(const BinaryMatrix &h1, const BinaryMatrix &h2);
/// Polynomials as bit strings, lowest degree first ("1101" is 1+x+x³).
StabilizerCode cyclic_hp(const std::string &h1, size_t n1, const std::string &h2, size_t n2);
StabilizerCode toric_code(size_t L);
/// h1 = 1+x on n1, h2 = 1+x+...+x^{l-1} on n2.
StabilizerCode debierre_turban(size_t n1, size_t n2, size_t l);
/// Layered code built from an inner stabilizer code and R = circulant(1+x, L).
StabilizerCode gauge_code(const StabilizerCode &inner, size_t L);

enum class GallagerLayout {
    /// h ones per row, v per column; rows = v n_c / h.
    kRowWeightH,
    /// h ones per column, v per row; rows = h n_c / v. This is the orientation under which
    /// the seed code has rate ≥ 1 − h/v.
    kColumnWeightH,
};

BinaryMatrix gallager_ldpc(size_t h, size_t v, size_t n_c, uint64_t seed,
                           GallagerLayout layout = GallagerLayout::kRowWeightH);

/// G̃ eᵀ.
BinaryVector syndrome(const StabilizerCode &code, const BinaryVector &e);

/// One sector of the decoding problem. Holds Θ (degeneracy generators), the syndrome map,
/// a basis of codeword classes, and a dual basis used to read class labels off.
class CodeSector {
   public:
    CodeSector(const StabilizerCode &code, Sector sector);

    Sector sector() const { return sector_; }
    size_t num_bonds() const { return theta_.cols(); }
    const BinaryMatrix &theta() const { return theta_; }
    const BinaryMatrix &check() const { return check_; }
    /// Independent rows spanning rowspace(Θ), in echelon form.
    const std::vector<BinaryVector> &theta_basis() const { return theta_basis_; }
    /// Class basis: zero-syndrome vectors, independent modulo rowspace(Θ).
    const BinaryMatrix &logicals() const { return logicals_; }
    /// b̃_j with Θ b̃_jᵀ = 0 and logical_i · b̃_j = δ_ij.
    const BinaryMatrix &dual_logicals() const { return dual_logicals_; }
    size_t num_logicals() const { return logicals_.rows(); }
    size_t rank_theta() const { return theta_basis_.size(); }
    size_t rank_check() const { return rank_check_; }

    BinaryVector syndrome(const BinaryVector &e) const { return check_.apply(e); }
    std::optional<BinaryVector> error_for_syndrome(const BinaryVector &s) const;
    /// Class label (bit j = coefficient of logical j) of a zero-syndrome vector.
    uint64_t class_of(const BinaryVector &x) const;
    /// Σ_j bit_j(cls) logical_j.
    BinaryVector class_vector(uint64_t cls) const;

   private:
    Sector sector_;
    BinaryMatrix theta_;
    BinaryMatrix check_;
    std::vector<BinaryVector> theta_basis_;
    BinaryMatrix logicals_;
    BinaryMatrix dual_logicals_;
    size_t rank_check_ = 0;
};

struct CodewordClasses {
    Sector sector = Sector::kFull;
    BinaryMatrix basis;
    /// Indexed by class label; present when 2^{basis rows} fits the budget.
    std::optional<std::vector<BinaryVector>> representatives;
    /// Coset minimum weight per class, exact flag alongside.
    std::vector<size_t> min_weights;
    std::vector<bool> min_weight_exact;
};

/// Class basis for a sector; full representative list (minimum-weight members, lexicographic
/// ties) when the number of classes is at most 2^max_log2_classes.
CodewordClasses codeword_classes(const StabilizerCode &code, Sector sector, size_t max_log2_classes = 12,
                                 const CosetSearchOptions &search = {});

inline constexpr size_t kInfiniteDistance = std::numeric_limits<size_t>::max();

struct CodeParams {
    size_t n = 0;
    size_t k = 0;
    /// kInfiniteDistance when k = 0.
    size_t d = kInfiniteDistance;
    bool d_exact = true;
    double rate = 0;
    std::string str() const;
};

/// Exact d when some nontrivial codeword has weight ≤ cap (all lighter weights are then
/// exhausted); otherwise an information-set upper bound with d_exact = false.
CodeParams distance(const StabilizerCode &code, size_t cap = 5);

/// Minimum weight of a nontrivial class in one sector; Pauli weight for kFull.
CodeParams sector_distance(const StabilizerCode &code, Sector sector, size_t cap = 5);

}  // namespace qecspin

#endif
