// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fockhom/network.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fockhom {

Eigen::Matrix2cd beamsplitter_matrix(double reflectivity, double phase) {
    if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) {
        throw std::invalid_argument("beamsplitter: reflectivity must be in [0, 1]");
    }
    const double t = std::sqrt(1.0 - reflectivity);
    const double r = std::sqrt(reflectivity);
    const Amplitude i(0, 1);
    Eigen::Matrix2cd m;
    m << t, i * std::polar(r, phase), i * std::polar(r, -phase), t;
    return m;
}

InterferometerNetwork::InterferometerNetwork(std::vector<ModeLabel> labels)
    : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (!index_.emplace(labels_[i], i).second) {
            throw std::invalid_argument("InterferometerNetwork: duplicate mode label");
        }
    }
}

std::optional<std::size_t> InterferometerNetwork::find_mode(const ModeLabel& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t InterferometerNetwork::mode(const ModeLabel& label) const {
    auto m = find_mode(label);
    if (!m) {
        throw std::out_of_range("InterferometerNetwork: no mode (" + std::to_string(label.spatial) +
                                "," + std::to_string(label.time_bin) + "," +
                                std::to_string(label.internal) + ")");
    }
    return *m;
}

void InterferometerNetwork::add(Element e) {
    const std::size_t n = labels_.size();
    auto check = [n](std::size_t m) {
        if (m >= n) {
            throw std::out_of_range("InterferometerNetwork: element references mode " +
                                    std::to_string(m) + " of " + std::to_string(n));
        }
    };
    std::visit(
        [&](const auto& el) {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, BeamSplitter>) {
                check(el.mode_a);
                check(el.mode_b);
                if (el.mode_a == el.mode_b) {
                    throw std::invalid_argument("beamsplitter needs two distinct modes");
                }
                if (!(el.reflectivity >= 0.0 && el.reflectivity <= 1.0)) {
                    throw std::invalid_argument("beamsplitter reflectivity must be in [0, 1]");
                }
            } else if constexpr (std::is_same_v<T, PhaseShift>) {
                check(el.mode);
            } else if constexpr (std::is_same_v<T, Delay>) {
                bool found = false;
                for (const auto& l : labels_) {
                    found = found || l.spatial == el.spatial;
                }
                if (!found) {
                    throw std::out_of_range("delay references unknown spatial mode " +
                                            std::to_string(el.spatial));
                }
            } else {
                check(el.mode_a);
                check(el.mode_b);
            }
        },
        e);
    elements_.push_back(e);
}

void InterferometerNetwork::append(const InterferometerNetwork& other) {
    if (other.labels_ != labels_) {
        throw std::invalid_argument("InterferometerNetwork::append: mode labels differ");
    }
    for (const auto& e : other.elements_) {
        add(e);
    }
}

std::vector<std::size_t> InterferometerNetwork::delay_permutation(const Delay& d) const {
    std::vector<std::size_t> perm(labels_.size());
    // Sorted bins per (spatial, internal) lane of the delayed spatial mode.
    std::map<int, std::vector<std::pair<int, std::size_t>>> lanes;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        perm[i] = i;
        if (labels_[i].spatial == d.spatial) {
            lanes[labels_[i].internal].push_back({labels_[i].time_bin, i});
        }
    }
    for (auto& [internal, lane] : lanes) {
        std::sort(lane.begin(), lane.end());
        const auto n = static_cast<long>(lane.size());
        for (long k = 0; k < n; ++k) {
            long target = ((k + d.bins) % n + n) % n;
            perm[lane[static_cast<std::size_t>(k)].second] = lane[static_cast<std::size_t>(target)].second;
        }
    }
    return perm;
}

namespace {

Eigen::MatrixXcd permutation_matrix(const std::vector<std::size_t>& perm) {
    auto n = static_cast<Eigen::Index>(perm.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        m(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(i)) = 1;
    }
    return m;
}

std::vector<std::size_t> swap_permutation(std::size_t n, std::size_t a, std::size_t b) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) {
        perm[i] = i;
    }
    std::swap(perm[a], perm[b]);
    return perm;
}

}  // namespace

ModeUnitary element_unitary(const InterferometerNetwork& net, const Element& e) {
    auto n = static_cast<Eigen::Index>(net.mode_count());
    return std::visit(
        [&](const auto& el) -> ModeUnitary {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, BeamSplitter>) {
                Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
                Eigen::Matrix2cd b = beamsplitter_matrix(el.reflectivity, el.phase);
                auto a = static_cast<Eigen::Index>(el.mode_a);
                auto c = static_cast<Eigen::Index>(el.mode_b);
                m(a, a) = b(0, 0);
                m(a, c) = b(0, 1);
                m(c, a) = b(1, 0);
                m(c, c) = b(1, 1);
                return ModeUnitary(m);
            } else if constexpr (std::is_same_v<T, PhaseShift>) {
                Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
                auto a = static_cast<Eigen::Index>(el.mode);
                m(a, a) = std::polar(1.0, el.phi);
                return ModeUnitary(m);
            } else if constexpr (std::is_same_v<T, Delay>) {
                return ModeUnitary(permutation_matrix(net.delay_permutation(el)));
            } else {
                return ModeUnitary(permutation_matrix(swap_permutation(net.mode_count(), el.mode_a, el.mode_b)));
            }
        },
        e);
}

ModeUnitary compile(const InterferometerNetwork& net) {
    if (net.mode_count() == 0) {
        throw std::invalid_argument("compile: network has no modes");
    }
    auto n = static_cast<Eigen::Index>(net.mode_count());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
    for (const auto& e : net.elements()) {
        m = element_unitary(net, e).matrix() * m;
    }
    double defect = unitarity_defect(m);
    if (defect > ModeUnitary::kTolerance) {
        throw std::runtime_error("compile: accumulated non-unitarity " + std::to_string(defect));
    }
    return ModeUnitary(m);
}

std::vector<ModeOp> lower(const InterferometerNetwork& net) {
    std::vector<ModeOp> ops;
    ops.reserve(net.elements().size());
    for (const auto& e : net.elements()) {
        ModeOp op;
        std::visit(
            [&](const auto& el) {
                using T = std::decay_t<decltype(el)>;
                if constexpr (std::is_same_v<T, BeamSplitter>) {
                    op.kind = ModeOp::Kind::kTwoMode;
                    op.a = el.mode_a;
                    op.b = el.mode_b;
                    op.matrix = beamsplitter_matrix(el.reflectivity, el.phase);
                } else if constexpr (std::is_same_v<T, PhaseShift>) {
                    op.kind = ModeOp::Kind::kPhase;
                    op.a = el.mode;
                    op.phase = el.phi;
                } else if constexpr (std::is_same_v<T, Delay>) {
                    op.kind = ModeOp::Kind::kPermutation;
                    op.perm = net.delay_permutation(el);
                } else {
                    op.kind = ModeOp::Kind::kPermutation;
                    op.perm = swap_permutation(net.mode_count(), el.mode_a, el.mode_b);
                }
            },
            e);
        ops.push_back(std::move(op));
    }
    return ops;
}

MultimodeFockState propagate(const MultimodeFockState& state, const InterferometerNetwork& net) {
    if (state.mode_count() != net.mode_count()) {
        throw std::invalid_argument("propagate: state and network mode counts differ");
    }
    const auto ops = lower(net);
    return apply_mode_ops(state, ops);
}

MixedState propagate(const MixedState& state, const InterferometerNetwork& net) {
    if (state.mode_count() != net.mode_count()) {
        throw std::invalid_argument("propagate: state and network mode counts differ");
    }
    const auto ops = lower(net);
    std::vector<WeightedState> out;
    out.reserve(state.components().size());
    for (const auto& c : state.components()) {
        out.push_back({c.weight, apply_mode_ops(c.state, ops)});
    }
    return MixedState(std::move(out));
}

nlohmann::json InterferometerNetwork::to_json() const {
    nlohmann::json modes = nlohmann::json::array();
    for (const auto& l : labels_) {
        modes.push_back({l.spatial, l.time_bin, l.internal});
    }
    nlohmann::json elems = nlohmann::json::array();
    for (const auto& e : elements_) {
        std::visit(
            [&](const auto& el) {
                using T = std::decay_t<decltype(el)>;
                if constexpr (std::is_same_v<T, BeamSplitter>) {
                    elems.push_back({{"type", "beamsplitter"},
                                     {"modes", {el.mode_a, el.mode_b}},
                                     {"reflectivity", el.reflectivity},
                                     {"phase", el.phase}});
                } else if constexpr (std::is_same_v<T, PhaseShift>) {
                    elems.push_back({{"type", "phase_shift"}, {"mode", el.mode}, {"phi", el.phi}});
                } else if constexpr (std::is_same_v<T, Delay>) {
                    elems.push_back({{"type", "delay"}, {"spatial", el.spatial}, {"bins", el.bins}});
                } else {
                    elems.push_back({{"type", "swap"}, {"modes", {el.mode_a, el.mode_b}}});
                }
            },
            e);
    }
    return {{"modes", modes}, {"elements", elems}};
}

InterferometerNetwork InterferometerNetwork::from_json(const nlohmann::json& j) {
    std::vector<ModeLabel> labels;
    for (const auto& m : j.at("modes")) {
        labels.push_back({m.at(0).get<int>(), m.at(1).get<int>(), m.at(2).get<int>()});
    }
    InterferometerNetwork net(std::move(labels));
    for (const auto& e : j.at("elements")) {
        const auto type = e.at("type").get<std::string>();
        if (type == "beamsplitter") {
            net.add(BeamSplitter{e.at("modes").at(0).get<std::size_t>(),
                                 e.at("modes").at(1).get<std::size_t>(),
                                 e.at("reflectivity").get<double>(), e.at("phase").get<double>()});
        } else if (type == "phase_shift") {
            net.add(PhaseShift{e.at("mode").get<std::size_t>(), e.at("phi").get<double>()});
        } else if (type == "delay") {
            net.add(Delay{e.at("spatial").get<int>(), e.value("bins", 1)});
        } else if (type == "swap") {
            net.add(Swap{e.at("modes").at(0).get<std::size_t>(), e.at("modes").at(1).get<std::size_t>()});
        } else {
            throw std::invalid_argument("InterferometerNetwork::from_json: unknown element type '" +
                                        type + "'");
        }
    }
    return net;
}

ModePattern HeraldPattern::to_pattern(std::size_t mode_count) const {
    ModePattern p(mode_count);
    for (const auto& [mode, count] : counts) {
        if (mode >= mode_count) {
            throw std::out_of_range("HeraldPattern: mode outside network");
        }
        p[mode] = count;
    }
    return p;
}

// --- MZI ---------------------------------------------------------------------

namespace {

constexpr int kShortArm = 0;
constexpr int kLongArm = 1;

int lanes(const MziOptions& o) { return o.perpendicular ? 2 * o.internal_modes : o.internal_modes; }

}  // namespace

std::size_t MziNetwork::input_mode(int pulse, int internal) const {
    if (pulse < 0 || pulse >= options.window || internal < 0 || internal >= options.internal_modes) {
        throw std::out_of_range("MziNetwork::input_mode");
    }
    return network.mode({kShortArm, pulse, internal});
}

std::vector<std::size_t> MziNetwork::detector_modes(int detector, int bin) const {
    if (detector != 1 && detector != 2) {
        throw std::out_of_range("MziNetwork: detector must be 1 or 2");
    }
    // With the symmetric beamsplitter convention the long-arm output port of
    // BS2 carries the constructive fringe I1 ~ 1 + c1 cos(phi).
    const int spatial = detector == 1 ? kLongArm : kShortArm;
    std::vector<std::size_t> modes;
    for (int k = 0; k < lanes(options); ++k) {
        modes.push_back(network.mode({spatial, bin, k}));
    }
    return modes;
}

MziNetwork build_unbalanced_mzi(const MziOptions& o) {
    if (o.window < 4) {
        throw std::invalid_argument("build_unbalanced_mzi: window must be at least 4 pulses");
    }
    if (!(o.r1 > 0 && o.r1 < 1 && o.r2 > 0 && o.r2 < 1)) {
        throw std::invalid_argument("build_unbalanced_mzi: reflectivities must be in (0, 1)");
    }
    if (o.internal_modes < 1) {
        throw std::invalid_argument("build_unbalanced_mzi: need at least one internal mode");
    }
    const int k_all = lanes(o);
    std::vector<ModeLabel> labels;
    for (int s : {kShortArm, kLongArm}) {
        for (int t = 0; t <= o.window; ++t) {
            for (int k = 0; k < k_all; ++k) {
                labels.push_back({s, t, k});
            }
        }
    }
    MziNetwork mzi{InterferometerNetwork(std::move(labels)), o};
    auto& net = mzi.network;
    for (int t = 0; t < o.window; ++t) {
        for (int k = 0; k < o.internal_modes; ++k) {
            net.add(BeamSplitter{net.mode({kShortArm, t, k}), net.mode({kLongArm, t, k}), o.r1, 0.0});
        }
    }
    net.add(Delay{kLongArm, 1});
    for (int t = 0; t <= o.window; ++t) {
        for (int k = 0; k < o.internal_modes; ++k) {
            net.add(PhaseShift{net.mode({kLongArm, t, k}), o.phi});
            if (o.perpendicular) {
                net.add(Swap{net.mode({kLongArm, t, k}), net.mode({kLongArm, t, k + o.internal_modes})});
            }
        }
    }
    for (int t = 0; t <= o.window; ++t) {
        for (int k = 0; k < k_all; ++k) {
            net.add(BeamSplitter{net.mode({kShortArm, t, k}), net.mode({kLongArm, t, k}), o.r2, 0.0});
        }
    }
    return mzi;
}

// --- Heralded gates ----------------------------------------------------------

void append_rotation(InterferometerNetwork& net, std::size_t a, std::size_t b, double angle) {
    const double pi = std::numbers::pi;
    double g = std::remainder(angle, 2 * pi);
    if (std::cos(g) < 0) {
        // R(g) = -R(g - pi); the sign is a pi phase on both modes.
        net.add(PhaseShift{a, pi});
        net.add(PhaseShift{b, pi});
        g = std::remainder(g - pi, 2 * pi);
    }
    const double s = std::sin(g);
    net.add(BeamSplitter{a, b, s * s, s >= 0 ? pi / 2 : -pi / 2});
}

}  // namespace fockhom
