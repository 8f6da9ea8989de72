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

#ifndef QECSPIN_ANALYSIS_H
#define QECSPIN_ANALYSIS_H

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qecspin/codes.h"
#include "qecspin/wegner.h"

namespace qecspin {

/// Per-class defect free energies for one disorder e at one β, all from a single
/// class enumeration. Index = class label relative to e.
struct DefectFreeEnergies {
    double beta = 0;
    uint64_t c_max = 0;
    /// β⁻¹ log Z_max / Z_{c_max + c}
    std::vector<double> delta_max;
    /// β⁻¹ log Z_0 / Z_c
    std::vector<double> delta_0;
};

DefectFreeEnergies defect_free_energies(const CodeSector &sector, const BinaryVector &e, double beta);
DefectFreeEnergies defect_free_energies(const ClassHistograms &hist, double beta);

double delta_f_max(const CodeSector &sector, const BinaryVector &e, uint64_t cls, double beta);
double delta_f_0(const CodeSector &sector, const BinaryVector &e, uint64_t cls, double beta);
double delta_f_max(const StabilizerCode &code, Sector sector, const BinaryVector &e, uint64_t cls, double beta);
double delta_f_0(const StabilizerCode &code, Sector sector, const BinaryVector &e, uint64_t cls, double beta);

/// d_c: minimum bond weight of each class coset at e = 0 (entry 0 is 0).
std::vector<size_t> class_min_weights(const CodeSector &sector);

/// Σ_b (Z_b/Σ Z) β_p⁻¹ log(Z_b / Z_{b+c}) over the classes b of syndrome s.
double syndrome_avg_delta_f(const CodeSector &sector, const BinaryVector &s, uint64_t cls, double p);
std::vector<double> syndrome_avg_delta_f(const ClassHistograms &hist, double beta);

struct BoundScan {
    std::string code_name;
    std::string sector;
    double p = 0;
    size_t syndromes = 0;
    size_t checks = 0;
    size_t violations = 0;
    /// Most negative of (bound − value) and (value − 0) over every check; ≥ −tolerance means clean.
    double worst_slack = 0;
    std::string worst;
};

/// Every reachable syndrome, every class: 0 ≤ ΔF_max ≤ 2d_c, ΔF_0 ≤ 2d_c and the
/// syndrome-averaged ΔF in [0, 2d_c], each at β_p. Histograms are shared across the p list.
std::vector<BoundScan> bound_scan(const StabilizerCode &code, Sector sector, const std::vector<double> &ps,
                                  double tolerance = 1e-9);

struct DefectReport {
    uint64_t cls = 0;
    size_t d_c = 0;
    /// Disorder averages with standard errors.
    double delta_f_max = 0, delta_f_max_err = 0;
    double delta_f_0 = 0, delta_f_0_err = 0;
    /// λ_c = [ΔF_max]/d_c
    double tension = 0, tension_err = 0;
};

struct TensionReport {
    std::string code_name;
    /// "X", "Z", "full", or "full(XxZ)" for a CSS code combined from its two sectors.
    std::string scope;
    size_t n = 0;
    size_t k = 0;
    double rate = 0;
    double p = 0;
    double beta = 0;
    uint64_t seed = 0;
    size_t samples = 0;
    size_t num_classes = 0;
    std::vector<DefectReport> classes;
    double lambda_bar = 0, lambda_bar_err = 0;
    /// β λ̄ − R ln 2
    double margin = 0, margin_err = 0;
    /// Per-sample λ̄, in sample order.
    std::vector<double> lambda_bar_samples;
};

struct TensionOptions {
    size_t threads = 1;
    size_t max_log2 = 32;
};

/// Disorder from P(e) at rate p, ΔF evaluated at β. Sector::kFull on a CSS code combines
/// the X and Z sectors, which are independent under the bit-flip model.
TensionReport tension_report(const StabilizerCode &code, Sector sector, double p, double beta, size_t samples,
                             uint64_t seed, const TensionOptions &options = {});

/// β_sd with sinh 2β_sd = 1.
double self_dual_beta();

struct SelfDualCheck {
    std::string sector;
    double beta = 0;
    /// Σ_{c≠0} exp(−β ΔF_c^(0)(0;β)) = Σ_{c≠0} Z_c/Z_0
    double lhs = 0;
    double target = 0;
    double residual = 0;
    /// Human-readable target expression.
    std::string target_form;
};

/// Clean system at β_sd. Full sector: target 2^k − 1. A CSS sector μ is dual to the other
/// sector μ̄, so the target is 2^{n/2 − rank G_μ̄} Z_0^{μ̄}/Z_0^{μ} − 1.
SelfDualCheck clean_self_dual_check(const StabilizerCode &code, Sector sector);

double binary_entropy(double p);
/// Root of H₂(p) = ½ in (0, ½).
double conjectured_pc();
/// Root of 1 − H₂(p) = R in (0, ½].
double shannon_p(double rate);

struct IndicatorSignature {
    /// Q_tot^{b̃_j}(e;β) for each dual logical b̃_j.
    std::vector<double> values;
    /// Class whose parities c·b̃_j match the signs.
    uint64_t dominant = 0;
};
IndicatorSignature indicator_signature(const CodeSector &sector, const BinaryVector &e, double beta);

/// Q_tot^m versus Σ_c (−1)^{c·m} Z_c Q_c^m / Z_tot; returns |difference|.
struct ExpansionCheck {
    double lhs = 0;
    double rhs = 0;
    double residual = 0;
};
ExpansionCheck correlation_expansion_check(const CodeSector &sector, const BinaryVector &e, const BinaryVector &m,
                                           double beta);

nlohmann::json to_json(const TensionReport &r);
nlohmann::json to_json(const BoundScan &r);
nlohmann::json to_json(const SelfDualCheck &r);
void write_csv(std::ostream &out, const TensionReport &r);

}  // namespace qecspin

#endif
