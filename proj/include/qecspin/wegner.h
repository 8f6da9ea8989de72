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

#ifndef QECSPIN_WEGNER_H
#define QECSPIN_WEGNER_H

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "qecspin/codes.h"
#include "qecspin/gf2.h"

namespace qecspin {

/// Thrown when an exact evaluation would exceed its enumeration budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Spins are rows of Θ, bonds are columns. R_b = Π_r S_r^{Θ_rb}.
/// couplings holds J_b; an evaluation at inverse temperature β uses K_b = β J_b.
class WegnerModel {
   public:
    explicit WegnerModel(BinaryMatrix theta, std::vector<double> couplings = {});

    const BinaryMatrix &theta() const { return theta_; }
    const std::vector<double> &couplings() const { return couplings_; }
    size_t num_spins() const { return theta_.rows(); }
    size_t num_bonds() const { return theta_.cols(); }
    size_t rank() const { return basis_.size(); }
    /// N_g = N_s − rank Θ.
    size_t degeneracy() const { return num_spins() - rank(); }
    bool uniform() const { return uniform_; }
    /// Independent rows spanning rowspace(Θ).
    const std::vector<BinaryVector> &basis() const { return basis_; }

   private:
    BinaryMatrix theta_;
    std::vector<double> couplings_;
    std::vector<BinaryVector> basis_;
    bool uniform_ = true;
};

struct DisorderConfig {
    BinaryVector e;
    BinaryVector m;

    static DisorderConfig clean(size_t num_bonds) { return {BinaryVector(num_bonds), BinaryVector(num_bonds)}; }
    static DisorderConfig electric(const BinaryVector &e) { return {e, BinaryVector(e.size())}; }
};

/// 𝒵 = sign · exp(log_abs). sign is 0 for an exact zero.
struct PartitionValue {
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;

    double value() const;
    static PartitionValue from_double(double v);
};

/// log(e^a - e^b) style helpers live in the .cc; this one is used by callers.
double log_ratio(const PartitionValue &num, const PartitionValue &den);

struct EnumBudget {
    size_t max_spins = 26;
    size_t max_rank = 24;
};

/// Direct sum over all 2^{N_s} spin configurations.
PartitionValue eval_spin_enum(const WegnerModel &model, const DisorderConfig &d, double beta,
                              size_t max_spins = EnumBudget{}.max_spins);

/// Weight-enumerator sum over the 2^{rank Θ} distinct bond patterns σΘ.
PartitionValue eval_coset_enum(const WegnerModel &model, const BinaryVector &e, double beta,
                               size_t max_rank = EnumBudget{}.max_rank);
/// Same walk with the sign (−1)^{x·m} of each bond pattern carried along.
PartitionValue eval_coset_enum(const WegnerModel &model, const DisorderConfig &d, double beta,
                               size_t max_rank = EnumBudget{}.max_rank);

/// Picks the cheapest exact route: spin walk, coset walk, or the coset walk of the dual
/// model (only when e = 0, so the dual sum has no signs).
PartitionValue evaluate(const WegnerModel &model, const DisorderConfig &d, double beta, const EnumBudget &budget = {});

/// Θ* = exact_dual(Θ) with couplings K*_b, tanh(β J_b) = exp(−2 K*_b). Evaluate it at β = 1.
WegnerModel dual_model(const WegnerModel &model, double beta = 1.0);

/// log of 2^{rank Θ − N_b} Π_b (1 + tanh K_b), the factor in 𝒵_{e,m}(Θ,K) = ± factor · 𝒵_{m,e}(Θ*,K*).
double duality_log_factor(const WegnerModel &model, double beta);

/// Weight histograms of e + c + rowspace(Θ) for every class c of a sector, optionally signed
/// by (−1)^{x·m} over the spin part x ∈ rowspace(Θ).
class ClassHistograms {
   public:
    ClassHistograms(size_t num_bonds, size_t num_classes);

    size_t num_bonds() const { return num_bonds_; }
    size_t num_classes() const { return num_classes_; }
    std::span<const int64_t> counts(uint64_t cls) const {
        return {counts_.data() + cls * (num_bonds_ + 1), num_bonds_ + 1};
    }
    std::span<int64_t> counts(uint64_t cls) { return {counts_.data() + cls * (num_bonds_ + 1), num_bonds_ + 1}; }

    /// Z_c at uniform coupling β (normalized per bond by 2 cosh β).
    PartitionValue partition(uint64_t cls, double beta) const;
    std::vector<PartitionValue> partitions(double beta) const;
    /// Smallest weight present in class c (the coset minimum weight when e = 0).
    size_t min_weight(uint64_t cls) const;

   private:
    size_t num_bonds_;
    size_t num_classes_;
    std::vector<int64_t> counts_;
};

/// Enumerates all 2^{rank Θ + #logicals} members of ker(check) + e. max_log2 caps that exponent.
ClassHistograms class_histograms(const CodeSector &sector, const BinaryVector &e, const BinaryVector *m = nullptr,
                                 size_t max_log2 = 32);

/// Z_0(e;β) = 𝒵_{e,0}(Θ, β).
PartitionValue z0(const CodeSector &sector, const BinaryVector &e, double beta);
/// Z_c(e;β) = Z_0(e + c;β).
PartitionValue zc(const CodeSector &sector, const BinaryVector &e, uint64_t cls, double beta);
/// Z_tot = 𝒵_{e,0}(check*, β), evaluated on the model built from nullspace(check).
PartitionValue ztot(const CodeSector &sector, const BinaryVector &e, double beta);

struct ZMax {
    PartitionValue value;
    uint64_t cls = 0;
};
ZMax zmax(const CodeSector &sector, const BinaryVector &e, double beta);

PartitionValue z0(const StabilizerCode &code, Sector sector, const BinaryVector &e, double beta);
PartitionValue zc(const StabilizerCode &code, Sector sector, const BinaryVector &e, uint64_t cls, double beta);
PartitionValue ztot(const StabilizerCode &code, Sector sector, const BinaryVector &e, double beta);
ZMax zmax(const StabilizerCode &code, Sector sector, const BinaryVector &e, double beta);

/// Q_tot^m(e;β) = 𝒵_{e,m}(check*)/𝒵_{e,0}(check*).
double correlator_tot(const CodeSector &sector, const BinaryVector &e, const BinaryVector &m, double beta);
/// Q_c^m(e;β) = 𝒵_{e+c,m}(Θ)/𝒵_{e+c,0}(Θ).
double correlator_c(const CodeSector &sector, const BinaryVector &e, uint64_t cls, const BinaryVector &m, double beta);

}  // namespace qecspin

#endif
