// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fockhom/cnot_study.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "fockhom/fock_ops.hpp"
#include "fockhom/nelder_mead.hpp"
#include "fockhom/ns_gate_solver.hpp"
#include "fockhom/parallel.hpp"

namespace fockhom {

namespace {

using M = CnotModes;
constexpr std::array<std::size_t, 4> kInputModes{M::c0, M::t0, M::h1, M::h3};
constexpr int kSubsets = 16;

// Logical occupation (c0, c1, t0, t1) of each two-qubit basis state |c t>.
const std::array<Occupation, 4> kLogicalBasis{Occupation{1, 0, 1, 0}, Occupation{1, 0, 0, 1},
                                              Occupation{0, 1, 1, 0}, Occupation{0, 1, 0, 1}};

// The control photon is split evenly over c0/c1 before the gate.
InterferometerNetwork gate_network() {
    const HeraldedCnot cnot = build_heralded_cnot();
    InterferometerNetwork net(cnot.network.labels());
    append_rotation(net, M::c0, M::c1, std::numbers::pi / 4);
    net.append(cnot.network);
    return net;
}

void check_inputs(const GateInputs& inputs) {
    for (const auto& s : inputs) {
        s.validate();
        if (s.m_overlap != 1 || s.p2.has_value()) {
            throw std::invalid_argument("run_gate: inputs must have m = 1 and no two-photon part");
        }
    }
}

// Amplitude (coherent) or probability (incoherent) weight of subset S.
Amplitude subset_amplitude(const GateInputs& in, int subset) {
    Amplitude x = 1;
    for (int k = 0; k < 4; ++k) {
        const double h = in[k].theta / 2;
        x *= (subset >> k & 1) ? std::polar(std::sin(h), in[k].alpha) : Amplitude(std::cos(h));
    }
    return x;
}

double subset_probability(const GateInputs& in, int subset) { return std::norm(subset_amplitude(in, subset)); }

MultimodeFockState subset_state(int subset) {
    Occupation occ(8, 0);
    for (int k = 0; k < 4; ++k) {
        if (subset >> k & 1) {
            occ[kInputModes[k]] = 1;
        }
    }
    return MultimodeFockState::basis(occ, MultimodeFockState::kMaxCutoff);
}

bool herald_fired(const Occupation& o) { return o[M::h0] == 0 && o[M::h1] == 1 && o[M::h2] == 0 && o[M::h3] == 1; }

// Heralded, unnormalized output of each input photon subset over the
// logical modes (at most two photons remain there).
class SubsetEngine {
   public:
    SubsetEngine() {
        for (int n = 0; n <= 2; ++n) {
            for (int a = 0; a <= n; ++a) {
                for (int b = 0; a + b <= n; ++b) {
                    for (int c = 0; a + b + c <= n; ++c) {
                        Occupation o{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                                     static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(n - a - b - c)};
                        index_.emplace(o, index_.size());
                    }
                }
            }
        }
        const auto dim = static_cast<Eigen::Index>(index_.size());
        for (std::size_t i = 0; i < 4; ++i) {
            logical_[i] = index_.at(kLogicalBasis[i]);
        }
        const InterferometerNetwork net = gate_network();
        for (int s = 0; s < kSubsets; ++s) {
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
            const MultimodeFockState out = propagate(subset_state(s), net);
            for (const auto& [occ, amp] : out.terms()) {
                if (herald_fired(occ)) {
                    v(static_cast<Eigen::Index>(index_.at(Occupation(occ.begin(), occ.begin() + 4)))) += amp;
                }
            }
            heralded_[s] = std::move(v);
        }
    }

    HeraldedGateResult run(const GateInputs& in, InputKind kind) const {
        HeraldedGateResult r;
        r.inputs = in;
        r.kind = kind;
        if (kind == InputKind::kCoherent) {
            Eigen::VectorXcd w = Eigen::VectorXcd::Zero(heralded_[0].size());
            for (int s = 0; s < kSubsets; ++s) {
                w += subset_amplitude(in, s) * heralded_[s];
            }
            r.p_herald = w.squaredNorm();
            if (r.p_herald > 0) {
                const Eigen::Vector4cd l = logical(w);
                r.logical_state = l * l.adjoint() / r.p_herald;
                r.fidelity = std::norm(bell(l)) / r.p_herald;
            }
        } else {
            double overlap = 0;
            for (int s = 0; s < kSubsets; ++s) {
                const double p = subset_probability(in, s);
                const Eigen::Vector4cd l = logical(heralded_[s]);
                r.p_herald += p * heralded_[s].squaredNorm();
                r.logical_state += p * l * l.adjoint();
                overlap += p * std::norm(bell(l));
            }
            if (r.p_herald > 0) {
                r.logical_state /= r.p_herald;
                r.fidelity = overlap / r.p_herald;
            } else {
                r.logical_state.setZero();
            }
        }
        r.fidelity = std::clamp(r.fidelity, 0.0, 1.0);
        return r;
    }

   private:
    Eigen::Vector4cd logical(const Eigen::VectorXcd& v) const {
        Eigen::Vector4cd l;
        for (int i = 0; i < 4; ++i) {
            l(i) = v(static_cast<Eigen::Index>(logical_[i]));
        }
        return l;
    }
    // <Phi+|l> with Phi+ = (|00> + |11>)/sqrt 2.
    static Amplitude bell(const Eigen::Vector4cd& l) { return (l(0) + l(3)) / std::numbers::sqrt2; }

    std::map<Occupation, std::size_t> index_;
    std::array<std::size_t, 4> logical_{};
    std::array<Eigen::VectorXcd, kSubsets> heralded_;
};

const SubsetEngine& subset_engine() {
    static const SubsetEngine engine;
    return engine;
}

HeraldedGateResult run_fock(const GateInputs& in, InputKind kind) {
    std::vector<WeightedState> parts;
    if (kind == InputKind::kCoherent) {
        MultimodeFockState psi(8, MultimodeFockState::kMaxCutoff);
        for (int s = 0; s < kSubsets; ++s) {
            const MultimodeFockState basis = subset_state(s);
            for (const auto& [occ, amp] : basis.terms()) {
                psi.add(occ, amp * subset_amplitude(in, s));
            }
        }
        parts.push_back({1.0, std::move(psi)});
    } else {
        for (int s = 0; s < kSubsets; ++s) {
            const double p = subset_probability(in, s);
            if (p > 0) {
                parts.push_back({p, subset_state(s)});
            }
        }
    }
    const InterferometerNetwork net = gate_network();
    const MixedState out = apply_mode_unitary(MixedState(std::move(parts)), compile(net));

    HeraldPattern herald;
    herald.counts = {{M::h0, 0}, {M::h1, 1}, {M::h2, 0}, {M::h3, 1}};
    const PostselectResult ps = postselect(out, herald.to_pattern(8));

    HeraldedGateResult r;
    r.inputs = in;
    r.kind = kind;
    r.p_herald = ps.probability;
    if (ps.empty()) {
        return r;
    }
    for (const auto& c : ps.conditional.components()) {
        Eigen::Vector4cd l;
        for (int i = 0; i < 4; ++i) {
            l(i) = c.state.amplitude(kLogicalBasis[i]);
        }
        r.logical_state += c.weight * l * l.adjoint();
        r.fidelity += c.weight * std::norm((l(0) + l(3)) / std::numbers::sqrt2);
    }
    r.fidelity = std::clamp(r.fidelity, 0.0, 1.0);
    return r;
}

}  // namespace

std::string to_string(InputKind k) { return k == InputKind::kCoherent ? "coherent" : "incoherent"; }

InputKind input_kind_from_string(const std::string& s) {
    if (s == "coherent") {
        return InputKind::kCoherent;
    }
    if (s == "incoherent") {
        return InputKind::kIncoherent;
    }
    throw std::invalid_argument("unknown input kind '" + s + "'");
}

PhaseConfig PhaseConfig::wrapped() const {
    PhaseConfig p = *this;
    for (auto& a : p.alpha) {
        a = std::fmod(a, 2 * std::numbers::pi);
        if (a < 0) {
            a += 2 * std::numbers::pi;
        }
    }
    return p;
}

GateInputs uniform_inputs(double theta, const PhaseConfig& phases) {
    GateInputs in;
    for (int k = 0; k < 4; ++k) {
        in[k] = SourcePulseSpec{theta, phases.alpha[k], 1.0, std::nullopt};
    }
    return in;
}

nlohmann::json HeraldedGateResult::to_json() const {
    nlohmann::json rho = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < 4; ++j) {
            row.push_back({logical_state(i, j).real(), logical_state(i, j).imag()});
        }
        rho.push_back(row);
    }
    nlohmann::json ins = nlohmann::json::array();
    for (const auto& s : inputs) {
        ins.push_back(s);
    }
    return {{"p_herald", p_herald}, {"fidelity", fidelity}, {"kind", to_string(kind)},
            {"inputs", ins},        {"logical_state", rho}};
}

HeraldedGateResult run_gate(const GateInputs& inputs, InputKind kind, GateEngine engine) {
    check_inputs(inputs);
    if (engine == GateEngine::kFockState) {
        return run_fock(inputs, kind);
    }
    return subset_engine().run(inputs, kind);
}

double herald_probability_four_photons() {
    const double p = ns_success_probability();
    return p * p;
}

double four_photon_probability(const GateInputs& inputs) {
    double p = 1;
    for (const auto& s : inputs) {
        p *= populations(s)[1];
    }
    return p;
}

BayesFidelity bayes_fidelity(double p1, double p_herald) {
    if (!(p1 >= 0 && p1 <= 1)) {
        throw std::invalid_argument("bayes_fidelity: p1 must be in [0, 1]");
    }
    const double p4 = p1 * p1 * p1 * p1;
    if (!(p_herald > 0)) {
        throw std::invalid_argument("bayes_fidelity: herald probability must be positive");
    }
    const double f = p4 * herald_probability_four_photons() / p_herald;
    return {std::min(f, 1.0), f > 1 + 1e-9};
}

BayesFidelity bayes_fidelity(const GateInputs& inputs, double p_herald) {
    if (!(p_herald > 0)) {
        throw std::invalid_argument("bayes_fidelity: herald probability must be positive");
    }
    const double f = four_photon_probability(inputs) * herald_probability_four_photons() / p_herald;
    return {std::min(f, 1.0), f > 1 + 1e-9};
}

std::vector<SweepPoint> sweep_theta(const PhaseConfig& phases, const std::vector<double>& thetas, InputKind kind) {
    for (double t : thetas) {
        if (!(t >= 0 && t <= std::numbers::pi + 1e-12)) {
            throw std::invalid_argument("sweep_theta: theta outside [0, pi]");
        }
    }
    subset_engine();
    return parallel_map<SweepPoint>(thetas.size(), [&](std::size_t i) {
        SweepPoint p;
        p.theta = std::min(thetas[i], std::numbers::pi);
        p.phases = phases;
        const GateInputs in = uniform_inputs(p.theta, phases);
        p.result = run_gate(in, kind);
        p.p4 = four_photon_probability(in);
        p.bayes_f = p.result.p_herald > 0 ? bayes_fidelity(in, p.result.p_herald).value : 0.0;
        return p;
    });
}

PhaseOptimum optimize_phases(double theta, Objective objective, const PhaseSearchOptions& options) {
    if (!(theta > 0 && theta <= std::numbers::pi + 1e-12)) {
        throw std::invalid_argument("optimize_phases: theta must be in (0, pi]");
    }
    if (options.grid_points < 8) {
        throw std::invalid_argument("optimize_phases: need at least 8 grid points per phase");
    }
    const double sign = objective == Objective::kMaximize ? -1.0 : 1.0;
    const SubsetEngine& engine = subset_engine();
    int evaluations = 0;
    auto cost = [&](const std::vector<double>& a) {
        ++evaluations;
        PhaseConfig pc{{a[0], a[1], a[2], a[3]}};
        return sign * engine.run(uniform_inputs(theta, pc), InputKind::kCoherent).p_herald;
    };

    const int g = options.grid_points;
    const double step = 2 * std::numbers::pi / g;
    std::vector<double> best(4, 0.0);
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<double> a(4);
    for (int i = 0; i < g * g * g * g; ++i) {
        int r = i;
        for (int k = 0; k < 4; ++k) {
            a[k] = step * (r % g);
            r /= g;
        }
        const double c = cost(a);
        if (c < best_cost) {
            best_cost = c;
            best = a;
        }
    }

    NelderMeadOptions nm;
    nm.initial_step = step / 2;
    nm.x_tolerance = options.x_tolerance;
    const NelderMeadResult res = nelder_mead(cost, best, nm);
    const std::vector<double>& x = res.value < best_cost ? res.x : best;

    PhaseOptimum out;
    out.phases = PhaseConfig{{x[0], x[1], x[2], x[3]}}.wrapped();
    const HeraldedGateResult r = engine.run(uniform_inputs(theta, out.phases), InputKind::kCoherent);
    out.p_herald = r.p_herald;
    out.fidelity = r.fidelity;
    out.evaluations = evaluations;
    return out;
}

}  // namespace fockhom
