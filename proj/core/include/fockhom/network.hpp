// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_NETWORK_HPP
#define FOCKHOM_NETWORK_HPP

#include <compare>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fockhom/fock_ops.hpp"
#include "fockhom/fock_state.hpp"

namespace fockhom {

struct ModeLabel {
    int spatial = 0;
    int time_bin = 0;
    int internal = 0;
    auto operator<=>(const ModeLabel&) const = default;
};

/// bs(r, psi) = [[sqrt(1-r), i e^{i psi} sqrt(r)], [i e^{-i psi} sqrt(r), sqrt(1-r)]]
/// psi = 0 is the symmetric 50:50 convention; psi = pi/2 gives the real
/// rotation [[t, -sqrt(r)], [sqrt(r), t]].
struct BeamSplitter {
    std::size_t mode_a;
    std::size_t mode_b;
    double reflectivity = 0.5;
    double phase = 0;
};

struct PhaseShift {
    std::size_t mode;
    double phi;
};

/// Moves every mode of `spatial` forward by `bins` time bins. Bins that run
/// off the end wrap to the start of the window, keeping the map a permutation.
struct Delay {
    int spatial;
    int bins = 1;
};

struct Swap {
    std::size_t mode_a;
    std::size_t mode_b;
};

using Element = std::variant<BeamSplitter, PhaseShift, Delay, Swap>;

Eigen::Matrix2cd beamsplitter_matrix(double reflectivity, double phase);

class InterferometerNetwork {
   public:
    InterferometerNetwork() = default;
    explicit InterferometerNetwork(std::vector<ModeLabel> labels);

    std::size_t mode_count() const { return labels_.size(); }
    const std::vector<ModeLabel>& labels() const { return labels_; }
    const std::vector<Element>& elements() const { return elements_; }

    std::optional<std::size_t> find_mode(const ModeLabel& label) const;
    std::size_t mode(const ModeLabel& label) const;

    /// Validates mode references before appending.
    void add(Element e);
    /// Appends every element of `other`, whose modes must match this network.
    void append(const InterferometerNetwork& other);

    /// Permutation of a delay element: result[i] is where mode i goes.
    std::vector<std::size_t> delay_permutation(const Delay& d) const;

    nlohmann::json to_json() const;
    static InterferometerNetwork from_json(const nlohmann::json& j);

   private:
    std::vector<ModeLabel> labels_;
    std::map<ModeLabel, std::size_t> index_;
    std::vector<Element> elements_;
};

ModeUnitary element_unitary(const InterferometerNetwork& net, const Element& e);

/// Product of element matrices in order (last element leftmost).
ModeUnitary compile(const InterferometerNetwork& net);

/// Lowers the element list to elementary mode operations.
std::vector<ModeOp> lower(const InterferometerNetwork& net);

/// Element-by-element propagation; equivalent to applying compile(net) but
/// cheap for sparse networks.
MultimodeFockState propagate(const MultimodeFockState& state, const InterferometerNetwork& net);
MixedState propagate(const MixedState& state, const InterferometerNetwork& net);

struct HeraldPattern {
    /// mode index -> exact photon count
    std::map<std::size_t, int> counts;

    ModePattern to_pattern(std::size_t mode_count) const;
};

// --- Unbalanced Mach-Zehnder ----------------------------------------------

struct MziOptions {
    int window = 5;
    double phi = 0;
    double r1 = 0.5;
    double r2 = 0.5;
    bool perpendicular = false;
    /// Internal modes per (spatial, bin) before the perpendicular doubling.
    int internal_modes = 1;
};

/// W input pulses on spatial mode 0 bins 0..W-1, BS1, one-bin delay plus
/// phase phi on the long arm, BS2, detectors D1/D2 over bins 0..W.
struct MziNetwork {
    InterferometerNetwork network;
    MziOptions options;

    std::size_t input_mode(int pulse, int internal) const;
    /// All modes seen by detector 1 or 2 at one output bin.
    std::vector<std::size_t> detector_modes(int detector, int bin) const;
};

MziNetwork build_unbalanced_mzi(const MziOptions& options);

// --- Heralded gates --------------------------------------------------------

/// Real rotation [[cos g, -sin g], [sin g, cos g]] on (a, b) expressed with
/// beamsplitter and phase elements.
void append_rotation(InterferometerNetwork& net, std::size_t a, std::size_t b, double angle);

struct NsGateAngles {
    double a;
    double b;
    double c;
};

struct NsGate {
    InterferometerNetwork network;  // modes: 0 signal, 1 photon ancilla, 2 vacuum ancilla
    HeraldPattern herald;           // {1: 1, 2: 0}
    NsGateAngles angles;
    double success_probability;
};

/// Heralded amplitude <n,1,0| U |n,1,0> of the NS block for n = 0, 1, 2.
std::array<Amplitude, 3> ns_gate_amplitudes(const NsGateAngles& angles);

/// Builds the NS block from the frozen constants and verifies the contract;
/// throws NumericalContractError if it is not met within 1e-9.
NsGate build_ns_gate();
NsGate build_ns_gate(const NsGateAngles& angles);

struct CnotModes {
    static constexpr std::size_t c0 = 0, c1 = 1, t0 = 2, t1 = 3;
    static constexpr std::size_t h0 = 4, h1 = 5, h2 = 6, h3 = 7;
};

struct HeraldedCnot {
    InterferometerNetwork network;  // 8 modes, see CnotModes
    HeraldPattern herald;           // h0 = 0, h1 = 1, h2 = 0, h3 = 1
    NsGateAngles ns_angles;
};

HeraldedCnot build_heralded_cnot();

/// Canonical JSON of the gate constants, hashed for output provenance.
nlohmann::json circuit_constants_json();

}  // namespace fockhom

#endif
