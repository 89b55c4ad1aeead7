// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fockhom/source.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fockhom {

void SourcePulseSpec::validate() const {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        throw std::invalid_argument("SourcePulseSpec: theta must be in [0, pi]");
    }
    if (!std::isfinite(alpha)) {
        throw std::invalid_argument("SourcePulseSpec: alpha must be finite");
    }
    if (!(m_overlap >= 0.0 && m_overlap <= 1.0)) {
        throw std::invalid_argument("SourcePulseSpec: m must be in [0, 1]");
    }
    if (p2.has_value()) {
        if (!(*p2 >= 0.0 && *p2 < 1.0)) {
            throw std::invalid_argument("SourcePulseSpec: p2 must be in [0, 1)");
        }
        double p0 = std::pow(std::cos(theta / 2), 2);
        if (p0 + *p2 > 1.0 + 1e-12) {
            throw std::invalid_argument("SourcePulseSpec: p0 + p2 exceeds 1 at this theta");
        }
    }
}

void to_json(nlohmann::json& j, const SourcePulseSpec& s) {
    j = nlohmann::json{{"theta", s.theta}, {"alpha", s.alpha}, {"m", s.m_overlap}};
    j["p2"] = s.p2.has_value() ? nlohmann::json(*s.p2) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, SourcePulseSpec& s) {
    s = SourcePulseSpec{};
    s.theta = j.at("theta").get<double>();
    s.alpha = j.value("alpha", 0.0);
    s.m_overlap = j.value("m", 1.0);
    if (j.contains("p2") && !j.at("p2").is_null()) {
        s.p2 = j.at("p2").get<double>();
    }
    s.validate();
}

std::array<double, 3> populations(const SourcePulseSpec& spec) {
    spec.validate();
    double p0 = std::pow(std::cos(spec.theta / 2), 2);
    double p2 = spec.p2.value_or(0.0);
    double p1 = std::max(0.0, 1.0 - p0 - p2);
    return {p0, p1, p2};
}

MultimodeFockState coherent_pulse(const SourcePulseSpec& spec) {
    auto p = populations(spec);
    MultimodeFockState s(1, spec.p2.has_value() ? 2 : MultimodeFockState::kDefaultCutoff);
    if (!spec.p2.has_value()) {
        // Direct trig form keeps theta = 0 and theta = pi exact.
        s.add({0}, std::cos(spec.theta / 2));
        s.add({1}, std::polar(std::sin(spec.theta / 2), spec.alpha));
    } else {
        for (int n = 0; n <= 2; ++n) {
            s.add({static_cast<std::uint8_t>(n)},
                  std::polar(std::sqrt(p[static_cast<std::size_t>(n)]), n * spec.alpha));
        }
    }
    s.prune();
    return s;
}

MixedState incoherent_pulse(const SourcePulseSpec& spec) {
    auto p = populations(spec);
    std::vector<WeightedState> parts;
    for (int n = 0; n <= 2; ++n) {
        if (p[static_cast<std::size_t>(n)] <= 0) {
            continue;
        }
        parts.push_back({p[static_cast<std::size_t>(n)],
                         MultimodeFockState::basis({static_cast<std::uint8_t>(n)}, 2)});
    }
    return MixedState(std::move(parts));
}

MixedState source_state(const SourcePulseSpec& spec) {
    spec.validate();
    const double w = std::sqrt(spec.m_overlap);
    std::vector<WeightedState> parts;
    if (w > 0) {
        MultimodeFockState single = coherent_pulse(spec);
        MultimodeFockState s(2, single.cutoff());
        for (const auto& [occ, amp] : single.terms()) {
            s.add({occ[0], 0}, amp);
        }
        parts.push_back({w, std::move(s)});
    }
    if (w < 1) {
        const MixedState mix = incoherent_pulse(spec);
        for (const auto& c : mix.components()) {
            MultimodeFockState s(2, 2);
            s.add({0, c.state.terms().begin()->first[0]}, 1.0);
            parts.push_back({(1 - w) * c.weight, std::move(s)});
        }
    }
    return MixedState(std::move(parts));
}

namespace {

// <psi| a_k |psi> for every mode k.
std::vector<Amplitude> mean_field(const MultimodeFockState& s) {
    std::vector<Amplitude> a(s.mode_count(), Amplitude{});
    for (const auto& [occ, amp] : s.terms()) {
        for (std::size_t k = 0; k < occ.size(); ++k) {
            if (occ[k] == 0) {
                continue;
            }
            Occupation lower = occ;
            lower[k] -= 1;
            a[k] += std::conj(s.amplitude(lower)) * amp * std::sqrt(static_cast<double>(occ[k]));
        }
    }
    return a;
}

}  // namespace

double c1_of(const MultimodeFockState& state) { return c1_of(MixedState(state)); }

double c1_of(const MixedState& state) {
    const std::size_t n = state.mode_count();
    std::vector<Amplitude> field(n, Amplitude{});
    double mu = 0;
    for (const auto& c : state.components()) {
        auto a = mean_field(c.state);
        for (std::size_t k = 0; k < n; ++k) {
            field[k] += c.weight * a[k];
            mu += c.weight * c.state.mean_photon_number(k);
        }
    }
    if (mu <= 0) {
        return 0.0;
    }
    double total = 0;
    for (const auto& f : field) {
        total += std::norm(f);
    }
    return total / mu;
}

CoherenceMetrics coherence_metrics(const MixedState& state, double m_overlap) {
    CoherenceMetrics m;
    for (const auto& c : state.components()) {
        for (std::size_t k = 0; k < c.state.mode_count(); ++k) {
            m.mu += c.weight * c.state.mean_photon_number(k);
        }
    }
    m.vacuum = m.mu <= 0;
    m.c1 = m.vacuum ? 0.0 : c1_of(state);
    m.s2_1M = s2_pure_dephasing(std::min(1.0, m.c1), m_overlap);
    return m;
}

CoherenceMetrics coherence_metrics(const SourcePulseSpec& spec) {
    return coherence_metrics(source_state(spec), spec.m_overlap);
}

double s2_pure_dephasing(double c1, double m) {
    if (!(c1 >= 0 && c1 <= 1 && m >= 0 && m <= 1)) {
        throw std::invalid_argument("s2_pure_dephasing: c1 and m must be in [0, 1]");
    }
    return c1 * (2 * m / (1 + m));
}

double pulse_area_from_intensity(double i_rel, IntensityMapping mapping) {
    if (!(i_rel >= 0.0 && i_rel <= 1.0)) {
        throw std::invalid_argument("pulse_area_from_intensity: intensity must be in [0, 1]");
    }
    switch (mapping) {
        case IntensityMapping::kArcsin:
            return 2 * std::asin(i_rel);
        case IntensityMapping::kArcsinSqrt:
            return 2 * std::asin(std::sqrt(i_rel));
    }
    throw std::logic_error("pulse_area_from_intensity: unknown mapping");
}

}  // namespace fockhom
