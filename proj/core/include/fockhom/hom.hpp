// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_HOM_HPP
#define FOCKHOM_HOM_HPP

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fockhom/network.hpp"
#include "fockhom/source.hpp"

namespace fockhom {

enum class DetectorPair { kD1D2, kD1D1, kD2D2 };

std::string to_string(DetectorPair p);

struct PeakKey {
    DetectorPair pair;
    int k;
    auto operator<=>(const PeakKey&) const = default;
};

/// Peak areas of the pulse-resolved correlation histogram.
///
/// `peak_areas` holds the unnormalized per-bin correlations
/// G_ab(k) = <:n_a(t) n_b(t + k):> for interior bins t; g2() divides by the
/// normalization.
struct CorrelationHistogram {
    std::map<PeakKey, double> peak_areas;
    double single_1 = 0;
    double single_2 = 0;
    double normalization = 0;
    /// Detector efficiency ratio eta1/eta2 used inside the normalization.
    double efficiency_ratio = 1;
    /// nullopt for the phase-averaged histogram.
    std::optional<double> phi;

    double area(DetectorPair p, int k) const;
    /// Auto-correlation peaks are rescaled by 1/rho (D1D1) and rho (D2D2),
    /// the same weights as in the normalization.
    double g2(DetectorPair p, int k) const;
    /// Mean of the k = +1 and k = -1 cross peaks, normalized.
    double g2_k1() const;
    int max_k() const;
};

enum class HomEngine {
    /// Output moments from per-pulse input moments and the compiled network
    /// matrix. Exact for the product input; the default.
    kMoments,
    /// Propagates the full multimode Fock state. Slow for M < 1.
    kFockState,
};

struct HomOptions {
    HomEngine engine = HomEngine::kMoments;
    int window = 5;
    double r1 = 0.5;
    double r2 = 0.5;
    int quadrature_points = 64;
    double eta1 = 1;
    double eta2 = 1;
    /// Overrides the ratio used in the normalization. By default fixed-phase
    /// runs use eta1/eta2 and phase-averaged runs estimate it from the
    /// averaged singles, as an experiment would.
    std::optional<double> efficiency_ratio;
};

/// Exact simulation of the unbalanced MZI fed with `window` i.i.d.
/// pulses of `source`. phi = nullopt averages over a uniform phase grid.
CorrelationHistogram simulate_histogram(const SourcePulseSpec& source, std::optional<double> phi,
                                        bool perpendicular, const HomOptions& options = {});

/// mu^2/4 from far-peak areas: (G11 / rho + 2 G12 + rho G22) / 4 with
/// rho = eta1/eta2. rho = 1 is the plain sum over the three detector pairs.
double normalization_factor(double g11_far, double g12_far, double g22_far,
                            double efficiency_ratio = 1.0);

double vhom(double g2_k0_par, double g2_k0_perp);

double ratio_phase_averaged(double c1);
/// Inverse of ratio_phase_averaged. Throws std::domain_error outside
/// [3/4, 3/2], where the 0/1-photon model cannot explain the ratio.
double c1_from_ratio(double r);

/// Visibility error from normalizing by phase-averaged parallel far peaks.
double delta_m(double c1, double m);

/// Closed forms for M = 1 (s = c1).
double g2_kfar_analytic(double c1, double phi);
double g2_k1_analytic(double s, double phi);

struct HomSummary {
    double g2_k0_par = 0;
    double g2_k0_perp = 0;
    double g2_k1 = 0;
    double g2_kfar = 0;
    double v_hom = 0;
    /// NaN when the ratio lies outside the 0/1 model range.
    double c1_est = 0;
    double m_est = 0;
    /// m_input minus the visibility obtained with far-peak normalization.
    double delta_m = 0;
    double v_hom_naive = 0;
    double ratio = 0;
    double c1_true = 0;
};

HomSummary compute_summary(const SourcePulseSpec& source, const HomOptions& options = {});

/// Amplitude s of g2_k1(phi) = A - (s/2) cos(2 phi), by Fourier projection
/// over the quadrature grid.
double k1_oscillation_amplitude(const SourcePulseSpec& source, const HomOptions& options = {});

}  // namespace fockhom

#endif
