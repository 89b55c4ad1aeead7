// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_SOURCE_HPP
#define FOCKHOM_SOURCE_HPP

#include <array>
#include <optional>

#include <nlohmann/json.hpp>

#include "fockhom/fock_state.hpp"

namespace fockhom {

/// Emitted pulse: pulse area theta, laser phase alpha, mean wavepacket
/// overlap m_overlap and an optional two-photon probability p2.
struct SourcePulseSpec {
    double theta = 0;
    double alpha = 0;
    double m_overlap = 1;
    std::optional<double> p2;

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;
    bool operator==(const SourcePulseSpec&) const = default;
};

void to_json(nlohmann::json& j, const SourcePulseSpec& s);
void from_json(const nlohmann::json& j, SourcePulseSpec& s);

/// (p0, p1, p2). p0 = cos^2(theta/2) always; p2 is taken out of p1.
std::array<double, 3> populations(const SourcePulseSpec& spec);

/// Single-mode pulse sum_n e^{i n alpha} sqrt(p_n) |n>, ignoring m_overlap.
MultimodeFockState coherent_pulse(const SourcePulseSpec& spec);

/// Internal-mode index of the shared (indistinguishable) wavepacket.
inline constexpr std::size_t kSharedMode = 0;
/// Internal-mode index of the pulse-unique (distinguishable) wavepacket.
inline constexpr std::size_t kUniqueMode = 1;

/// Pulse over two internal modes (shared, unique).
///
/// With weight w = sqrt(M) the pulse is the coherent state of
/// coherent_pulse() in the shared mode; with weight 1 - w it is the phase-free
/// mixture p0|0><0| + p1|1><1| (+ p2|2><2|) in the unique mode. Two pulses
/// then show HOM visibility M, and the first-order coherence is M * <a>.
MixedState source_state(const SourcePulseSpec& spec);

/// Phase-free mixture sum_n p_n |n><n| on one mode (incoherent input).
MixedState incoherent_pulse(const SourcePulseSpec& spec);

struct CoherenceMetrics {
    double c1 = 0;
    double mu = 0;
    double s2_1M = 0;
    /// Set when mu = 0; c1 is then reported as 0.
    bool vacuum = false;
};

/// (1/mu) sum_internal |<a_k>|^2 over all modes of a single pulse.
double c1_of(const MultimodeFockState& state);
double c1_of(const MixedState& state);

/// c1 and mu of source_state(spec); s2_1M via the pure-dephasing relation.
CoherenceMetrics coherence_metrics(const SourcePulseSpec& spec);
CoherenceMetrics coherence_metrics(const MixedState& state, double m_overlap);

double s2_pure_dephasing(double c1, double m);

enum class IntensityMapping {
    /// theta = 2 arcsin(I / I_pi)
    kArcsin,
    /// theta = 2 arcsin(sqrt(I / I_pi)), the Rabi population reading
    kArcsinSqrt,
};

double pulse_area_from_intensity(double i_rel, IntensityMapping mapping = IntensityMapping::kArcsin);

}  // namespace fockhom

#endif
