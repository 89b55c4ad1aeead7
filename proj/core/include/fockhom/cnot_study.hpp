// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_CNOT_STUDY_HPP
#define FOCKHOM_CNOT_STUDY_HPP

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "fockhom/network.hpp"
#include "fockhom/source.hpp"

namespace fockhom {

/// Physical inputs in order: control photon (split evenly over c0/c1),
/// target photon (t0), ancilla photons of the two NS blocks (h1, h3).
using GateInputs = std::array<SourcePulseSpec, 4>;

enum class InputKind {
    /// cos(theta/2)|0> + e^{i alpha} sin(theta/2)|1>.
    kCoherent,
    /// cos^2(theta/2)|0><0| + sin^2(theta/2)|1><1|; alpha is ignored.
    kIncoherent,
};

std::string to_string(InputKind k);
InputKind input_kind_from_string(const std::string& s);

struct PhaseConfig {
    std::array<double, 4> alpha{};

    /// Copy with every phase wrapped into [0, 2 pi).
    PhaseConfig wrapped() const;
};

GateInputs uniform_inputs(double theta, const PhaseConfig& phases = {});

struct HeraldedGateResult {
    double p_herald = 0;
    double fidelity = 0;
    /// Logical block of the heralded output, basis |c t> = 00, 01, 10, 11,
    /// normalized by p_herald. Its trace is the chance that both qubits are
    /// present after the herald.
    Eigen::Matrix4cd logical_state = Eigen::Matrix4cd::Zero();
    GateInputs inputs{};
    InputKind kind = InputKind::kCoherent;

    nlohmann::json to_json() const;
};

enum class GateEngine {
    /// Precomputed heralded output of each of the 16 input photon subsets.
    kSubsets,
    /// Full Fock-state propagation and postselection.
    kFockState,
};

/// Inputs must have m_overlap = 1 and no p2. Throws std::invalid_argument
/// otherwise.
HeraldedGateResult run_gate(const GateInputs& inputs, InputKind kind = InputKind::kCoherent,
                            GateEngine engine = GateEngine::kSubsets);

/// P(h | four photons) = ((3 - sqrt 2) / 7)^2.
double herald_probability_four_photons();

/// Fraction of runs with all four photons present: prod_i sin^2(theta_i/2).
double four_photon_probability(const GateInputs& inputs);

struct BayesFidelity {
    double value = 0;
    /// True when the raw value exceeded 1 + 1e-9 and was clamped.
    bool inconsistent = false;
};

/// p1^4 P(h|4) / p_herald. Throws std::invalid_argument for p_herald <= 0.
BayesFidelity bayes_fidelity(double p1, double p_herald);
/// Same with P(4) computed from per-input populations.
BayesFidelity bayes_fidelity(const GateInputs& inputs, double p_herald);

struct SweepPoint {
    double theta = 0;
    PhaseConfig phases;
    HeraldedGateResult result;
    double p4 = 0;
    double bayes_f = 0;
};

/// One gate run per theta, all inputs at that theta with the given phases.
/// Throws std::invalid_argument if a theta lies outside [0, pi].
std::vector<SweepPoint> sweep_theta(const PhaseConfig& phases, const std::vector<double>& thetas,
                                    InputKind kind = InputKind::kCoherent);

enum class Objective { kMaximize, kMinimize };

struct PhaseOptimum {
    PhaseConfig phases;
    double p_herald = 0;
    double fidelity = 0;
    int evaluations = 0;
};

struct PhaseSearchOptions {
    int grid_points = 8;
    double x_tolerance = 1e-9;
};

/// Full grid over the four phases, then a simplex refinement from the best
/// grid point. Deterministic. Throws std::invalid_argument unless theta is in
/// (0, pi] and grid_points >= 8.
PhaseOptimum optimize_phases(double theta, Objective objective, const PhaseSearchOptions& options = {});

/// Header matching SweepPoint rows.
inline constexpr const char* kCnotCsvHeader = "theta,alpha1,alpha2,alpha3,alpha4,p_herald,fidelity,p4,bayes_f";

}  // namespace fockhom

#endif
