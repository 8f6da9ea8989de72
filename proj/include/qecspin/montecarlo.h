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

#ifndef QECSPIN_MONTECARLO_H
#define QECSPIN_MONTECARLO_H

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#include "qecspin/codes.h"
#include "qecspin/wegner.h"

namespace qecspin {

/// H = −Σ_b J_b (−1)^{e_b} R_b, so exp(−βH) is the Boltzmann weight of the Wegner sum.
class MetropolisSampler {
   public:
    MetropolisSampler(const WegnerModel &model, const BinaryVector &e, double beta, uint64_t seed);

    /// N_s attempted flips at uniformly random sites.
    void sweep();
    double beta() const { return beta_; }
    void set_beta(double beta) { beta_ = beta; }

    double energy() const { return energy_; }
    int spin(size_t r) const { return spins_[r]; }
    /// Cached (−1)^{e_b} R_b.
    int bond_value(size_t b) const { return bonds_[b]; }
    /// Π_b R_b^{m_b}.
    int bond_product(const BinaryVector &m) const;
    size_t accepted() const { return accepted_; }
    size_t attempted() const { return attempted_; }

    /// Recomputes every cached bond and the energy from the spins; throws on mismatch.
    void check_consistency() const;

   private:
    const WegnerModel *model_;
    BinaryVector e_;
    double beta_;
    std::mt19937_64 rng_;
    std::vector<int8_t> spins_;
    std::vector<int8_t> bonds_;
    std::vector<std::vector<uint32_t>> spin_bonds_;
    std::vector<std::vector<uint32_t>> bond_spins_;
    std::vector<double> j_;
    double energy_ = 0;
    size_t accepted_ = 0;
    size_t attempted_ = 0;
};

struct McEstimate {
    double mean = 0;
    double stderr = 0;
    /// Integrated autocorrelation time in sweeps, from the block variance.
    double tau = 0;
    size_t sweeps = 0;
    size_t burn_in = 0;
};

/// Blocked mean and error with `blocks` equal blocks (leftover samples at the front dropped).
McEstimate blocked_estimate(const std::vector<double> &samples, size_t blocks = 16);

struct McTrace {
    std::vector<double> energy;
    /// Bond product Π R_b^{m_b} per sweep, when an m was given.
    std::vector<double> observable;
    void write_csv(std::ostream &out) const;
};

struct McRun {
    MetropolisSampler sampler;
    McTrace trace;
    size_t burn_in = 0;
};

/// `sweeps` total sweeps, the first `burn_in` of them unrecorded.
McRun metropolis_run(const WegnerModel &model, const BinaryVector &e, double beta, size_t sweeps, size_t burn_in,
                     uint64_t seed, const BinaryVector *m = nullptr);

/// Burn-in from a pilot run: 10 τ, at least 50 sweeps.
size_t pilot_burn_in(const WegnerModel &model, const BinaryVector &e, double beta, uint64_t seed);

struct EnergyCv {
    McEstimate energy;
    /// β²(⟨E²⟩ − ⟨E⟩²), blocked across the 16 blocks.
    McEstimate specific_heat;
};

EnergyCv estimate_energy_and_cv(const WegnerModel &model, const BinaryVector &e, double beta, size_t sweeps,
                                uint64_t seed, std::optional<size_t> burn_in = std::nullopt);

McEstimate estimate_correlator(const WegnerModel &model, const BinaryVector &e, const BinaryVector &m, double beta,
                               size_t sweeps, uint64_t seed, std::optional<size_t> burn_in = std::nullopt);

/// Exact ⟨E⟩ and ⟨E²⟩ at uniform J from the coset weight distribution.
struct ExactMoments {
    double energy = 0;
    double energy_sq = 0;
    double specific_heat(double beta) const { return beta * beta * (energy_sq - energy * energy); }
};
ExactMoments exact_energy_moments(const WegnerModel &model, const BinaryVector &e, double beta);

/// Replica exchange across a β ladder; one sweep of every replica, then swap attempts
/// between neighbours with probability min(1, exp((β_i − β_j)(E_i − E_j))).
class ParallelTempering {
   public:
    ParallelTempering(const WegnerModel &model, const BinaryVector &e, std::vector<double> betas, uint64_t seed);

    void step();
    /// Replica currently at ladder position i.
    const MetropolisSampler &at(size_t i) const { return replicas_[slot_[i]]; }
    size_t size() const { return betas_.size(); }
    double swap_rate(size_t i) const;

   private:
    std::vector<double> betas_;
    std::vector<MetropolisSampler> replicas_;
    std::vector<size_t> slot_;
    std::vector<size_t> swaps_accepted_;
    std::vector<size_t> swaps_tried_;
    std::mt19937_64 rng_;
};

std::vector<McEstimate> parallel_tempering_energies(const WegnerModel &model, const BinaryVector &e,
                                                    const std::vector<double> &betas, size_t sweeps, size_t burn_in,
                                                    uint64_t seed);

/// Disorder averages of the Z_tot correlator Q(β) = Q_tot^m(e;β) for a sector.
struct NishimoriReport {
    double p = 0;
    double beta = 0;
    double beta_p = 0;
    size_t samples = 0;
    double q_beta = 0, q_beta_err = 0;           // [Q(β)]
    double q_product = 0, q_product_err = 0;     // [Q(β) Q(β_p)]
    double q_beta_p = 0, q_beta_p_err = 0;       // [Q(β_p)]
    double identity_gap = 0, identity_err = 0;   // [Q] − [Q Q(β_p)]
    double inequality_margin = 0, inequality_err = 0;  // [Q(β_p)] − [Q(β)]²
    double identity_z() const { return identity_err > 0 ? identity_gap / identity_err : 0; }
    double inequality_z() const { return inequality_err > 0 ? inequality_margin / inequality_err : 0; }
};

/// Exact: every error of the sector weighted by P(e), correlators by exact enumeration.
NishimoriReport nishimori_identity_exact(const CodeSector &sector, const BinaryVector &m, double p, double beta);

/// Sampled: disorder from P(e), Q(β) and Q(β_p) from independent Metropolis chains.
NishimoriReport nishimori_identity_check(const CodeSector &sector, const BinaryVector &m, double p, double beta,
                                         size_t samples, size_t sweeps, uint64_t seed);

}  // namespace qecspin

#endif
