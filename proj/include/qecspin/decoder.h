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

#ifndef QECSPIN_DECODER_H
#define QECSPIN_DECODER_H

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qecspin/codes.h"
#include "qecspin/wegner.h"

namespace qecspin {

/// β_p = ½ ln((1 − p)/p).
double nishimori_beta(double p);

/// Independent flips with probability p on every bit. For the full (v|u) picture this gives
/// p_x = p_z = p(1 − p) and p_y = p².
struct ErrorModel {
    double p = 0;
};

BinaryVector sample_error(const ErrorModel &model, size_t num_bits, std::mt19937_64 &rng);

struct DecodeOutcome {
    BinaryVector syndrome;
    /// Class of the chosen correction relative to `correction_base`.
    uint64_t c_max = 0;
    /// The particular solution e_s the class labels are relative to.
    BinaryVector correction_base;
    /// e_s + c_max representative.
    BinaryVector correction;
    double p_succ_conditional = 1;
    std::vector<double> log_z;
    double log_z_max = 0;
    double log_z_tot = 0;
    bool tie = false;
    /// Filled in by decode_error: decoded class equals the true class.
    bool success = false;
};

/// Caches the sector structure so repeated decodes only pay for the class sums.
class SectorDecoder {
   public:
    SectorDecoder(const StabilizerCode &code, Sector sector, size_t max_log2 = 32);

    const CodeSector &sector() const { return sector_; }
    DecodeOutcome decode(const BinaryVector &syndrome, double beta) const;
    /// Decodes the syndrome of e and scores success against e's own class.
    DecodeOutcome decode_error(const BinaryVector &e, double beta) const;

   private:
    CodeSector sector_;
    size_t max_log2_;
};

DecodeOutcome ml_decode(const StabilizerCode &code, Sector sector, const BinaryVector &s, double beta);

struct TrialRecord {
    uint64_t seed = 0;
    double p = 0;
    double beta = 0;
    std::string code_id;
    std::string sector;
    bool success = false;
    double log_z_max = 0;
    double log_z_tot = 0;
};

struct PsuccEstimate {
    size_t trials = 0;
    /// Fraction of trials whose decoded class equals the true class.
    double mean = 0;
    double stderr = 0;
    /// Average of Z_max/Z_tot over the same trials.
    double zratio_mean = 0;
    double zratio_stderr = 0;
    size_t ties = 0;
};

struct PsuccOptions {
    size_t threads = 1;
    std::string code_id;
    /// Receives one record per trial (per sector), in trial order.
    std::function<void(const TrialRecord &)> sink;
};

/// Monte Carlo over errors drawn at rate p. For Sector::kFull on a CSS code pass the sector
/// you want; decode_css_full combines both sectors.
PsuccEstimate estimate_psucc(const StabilizerCode &code, Sector sector, double p, double beta, size_t trials,
                             uint64_t seed, const PsuccOptions &options = {});

/// CSS code, both sectors decoded independently; success needs both.
PsuccEstimate estimate_psucc_css(const StabilizerCode &code, double p, double beta, size_t trials, uint64_t seed,
                                 const PsuccOptions &options = {});

/// Σ_e P(e) · [decoded class = true class] by enumerating every error of the sector.
double exhaustive_psucc(const StabilizerCode &code, Sector sector, double p, double beta);
/// Σ_s Z_max(s; β) over all reachable syndromes.
double sum_zmax_over_syndromes(const StabilizerCode &code, Sector sector, double beta);

struct CurvePoint {
    double p = 0;
    PsuccEstimate estimate;
};

struct ThresholdScan {
    std::vector<std::string> labels;
    /// curves[i][j]: code i at p_grid[j].
    std::vector<std::vector<CurvePoint>> curves;
    /// One entry per adjacent pair that crosses.
    std::vector<double> crossings;
    std::optional<double> median;
    double spread = 0;
    std::string diagnostic;
};

struct ThresholdOptions {
    size_t threads = 1;
    /// Use the Z_max/Z_tot average for the curves instead of the success fraction.
    bool use_zratio = true;
    std::function<void(const TrialRecord &)> sink;
};

/// CSS family ordered by size; full-code success probability per (code, p).
ThresholdScan threshold_scan(const std::vector<StabilizerCode> &family, const std::vector<std::string> &labels,
                             const std::vector<double> &p_grid, size_t trials, uint64_t seed,
                             const ThresholdOptions &options = {});

/// Crossing of two curves sampled on the same grid by linear interpolation of their
/// difference; nullopt when the sign never changes.
std::optional<double> curve_crossing(const std::vector<double> &p, const std::vector<double> &small,
                                     const std::vector<double> &large);

}  // namespace qecspin

#endif
