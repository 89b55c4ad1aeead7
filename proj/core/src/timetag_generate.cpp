// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fockhom/timetag_generate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fockhom/network.hpp"

namespace fockhom {

namespace {

constexpr std::uint64_t kChunkPulses = 1 << 16;
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

double factorial(int n) { return std::tgamma(n + 1.0); }

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// <p, q| U |na, nb> for the two-mode unitary m (column convention).
Amplitude two_mode_amplitude(const Eigen::Matrix2cd& m, int na, int nb, int p, int q) {
    if (na + nb != p + q) {
        return 0;
    }
    Amplitude sum = 0;
    for (int i = 0; i <= na; ++i) {
        const int j = p - i;
        if (j < 0 || j > nb) {
            continue;
        }
        sum += binomial(na, i) * std::pow(m(0, 0), i) * std::pow(m(1, 0), na - i) * binomial(nb, j) *
               std::pow(m(0, 1), j) * std::pow(m(1, 1), nb - j);
    }
    return sum * std::sqrt(factorial(p) * factorial(q) / (factorial(na) * factorial(nb)));
}

// One pure branch of the source mixture: either a superposition in the
// shared internal mode or a Fock state in the pulse's unique mode.
struct Branch {
    double weight;
    std::vector<Amplitude> shared;  // amplitude of |n> in the shared mode
    int unique = 0;
};

std::vector<Branch> source_branches(const SourcePulseSpec& spec) {
    std::vector<Branch> out;
    const MixedState mix = source_state(spec);
    for (const auto& c : mix.components()) {
        Branch b{c.weight, {}, 0};
        bool unique = false;
        for (const auto& [occ, amp] : c.state.terms()) {
            if (occ[kUniqueMode] > 0) {
                if (c.state.size() != 1 || occ[kSharedMode] != 0) {
                    throw std::logic_error("generate_counts: unsupported source component");
                }
                unique = true;
                b.unique = occ[kUniqueMode];
            }
        }
        if (!unique) {
            for (const auto& [occ, amp] : c.state.terms()) {
                const std::size_t n = occ[kSharedMode];
                if (b.shared.size() <= n) {
                    b.shared.resize(n + 1, 0.0);
                }
                b.shared[n] += amp;
            }
        }
        out.push_back(std::move(b));
    }
    return out;
}

int binomial_sample(int n, double p, SplitMix64& rng) {
    int k = 0;
    for (int i = 0; i < n; ++i) {
        k += rng.uniform() < p ? 1 : 0;
    }
    return k;
}

class Sampler {
   public:
    explicit Sampler(const GeneratorOptions& o) : o_(o), branches_(source_branches(o.source)) {
        for (const auto& b : branches_) {
            n_max_ = std::max(n_max_, static_cast<int>(b.shared.size()) - 1);
            n_max_ = std::max(n_max_, b.unique);
        }
        const int d = n_max_ + 1;
        bs1_ = beamsplitter_matrix(o.r1, 0.0);
        bs2_ = beamsplitter_matrix(o.r2, 0.0);
        // Pulse after the first splitter, indexed [s * d + l'].
        for (const auto& b : branches_) {
            std::vector<Amplitude> p(static_cast<std::size_t>(d * d), 0.0);
            if (b.shared.empty()) {
                p[0] = 1;
            }
            for (int n = 0; n < static_cast<int>(b.shared.size()); ++n) {
                for (int s = 0; s <= n; ++s) {
                    p[s * d + (n - s)] += b.shared[n] * two_mode_amplitude(bs1_, n, 0, s, n - s);
                }
            }
            after_bs1_.push_back(std::move(p));
        }
        // Second splitter: input (short s, long l) -> output (D2, D1).
        t2_.assign(static_cast<std::size_t>(d * d * (2 * d - 1)), 0.0);
        for (int s = 0; s < d; ++s) {
            for (int l = 0; l < d; ++l) {
                for (int d2 = 0; d2 <= s + l; ++d2) {
                    t2_[idx_t2(s, l, d2)] = two_mode_amplitude(bs2_, s, l, d2, s + l - d2);
                }
            }
        }
        long_.assign(static_cast<std::size_t>(d), 0.0);
        long_[0] = 1;
        p_long_to_d1_ = std::norm(bs2_(1, 1));
        p_short_to_d1_ = std::norm(bs2_(1, 0));
        p_to_long_ = std::norm(bs1_(1, 0));
    }

    // Samples output bin counts (D1, D2) for the next pulse at phase phi.
    std::pair<int, int> step(double phi, SplitMix64& rng) {
        const int d = n_max_ + 1;
        const std::size_t bi = pick_branch(rng);
        const auto& p = after_bs1_[bi];
        int n1 = 0;
        int n2 = 0;

        // Unique-mode photons are distinguishable from everything else and
        // split classically at both splitters.
        const int from_long = binomial_sample(unique_long_, p_long_to_d1_, rng);
        n1 += from_long;
        n2 += unique_long_ - from_long;
        const int unique_now = branches_[bi].unique;
        const int to_long = binomial_sample(unique_now, p_to_long_, rng);
        const int short_now = unique_now - to_long;
        const int from_short = binomial_sample(short_now, p_short_to_d1_, rng);
        n1 += from_short;
        n2 += short_now - from_short;
        unique_long_ = to_long;

        std::vector<Amplitude> next(static_cast<std::size_t>(d), 0.0);
        if (o_.perpendicular) {
            // The two arms no longer overlap at the second splitter, so each
            // arm's photon number is measured separately.
            const int l = sample_index(long_, rng);
            std::vector<double> ps(static_cast<std::size_t>(d), 0.0);
            for (int s = 0; s < d; ++s) {
                for (int lp = 0; lp < d; ++lp) {
                    ps[s] += std::norm(p[s * d + lp]);
                }
            }
            const int s = sample_weights(ps, rng);
            for (int lp = 0; lp < d; ++lp) {
                next[lp] = p[s * d + lp] / std::sqrt(ps[s]);
            }
            const int l1 = binomial_sample(l, p_long_to_d1_, rng);
            const int s1 = binomial_sample(s, p_short_to_d1_, rng);
            n1 += l1 + s1;
            n2 += (l - l1) + (s - s1);
        } else {
            const int dd = 2 * d - 1;
            // out[(d1 * dd + d2) * d + l']
            std::vector<Amplitude> out(static_cast<std::size_t>(dd * dd * d), 0.0);
            for (int l = 0; l < d; ++l) {
                if (long_[l] == Amplitude(0)) {
                    continue;
                }
                const Amplitude al = long_[l] * std::polar(1.0, phi * l);
                for (int s = 0; s < d; ++s) {
                    for (int lp = 0; lp < d; ++lp) {
                        const Amplitude a = al * p[s * d + lp];
                        if (a == Amplitude(0)) {
                            continue;
                        }
                        for (int d2 = 0; d2 <= s + l; ++d2) {
                            const int d1 = s + l - d2;
                            out[(d1 * dd + d2) * d + lp] += a * t2_[idx_t2(s, l, d2)];
                        }
                    }
                }
            }
            std::vector<double> w(static_cast<std::size_t>(dd * dd), 0.0);
            for (std::size_t k = 0; k < w.size(); ++k) {
                for (int lp = 0; lp < d; ++lp) {
                    w[k] += std::norm(out[k * d + lp]);
                }
            }
            const int k = sample_weights(w, rng);
            for (int lp = 0; lp < d; ++lp) {
                next[lp] = out[k * d + lp] / std::sqrt(w[k]);
            }
            n1 += k / dd;
            n2 += k % dd;
        }
        long_ = std::move(next);
        return {n1, n2};
    }

   private:
    std::size_t idx_t2(int s, int l, int d2) const {
        const int d = n_max_ + 1;
        return static_cast<std::size_t>((s * d + l) * (2 * d - 1) + d2);
    }

    std::size_t pick_branch(SplitMix64& rng) const {
        if (branches_.size() == 1) {
            return 0;
        }
        double u = rng.uniform();
        for (std::size_t i = 0; i + 1 < branches_.size(); ++i) {
            u -= branches_[i].weight;
            if (u < 0) {
                return i;
            }
        }
        return branches_.size() - 1;
    }

    static int sample_weights(const std::vector<double>& w, SplitMix64& rng) {
        double total = 0;
        for (double x : w) {
            total += x;
        }
        double u = rng.uniform() * total;
        int last = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i] <= 0) {
                continue;
            }
            last = static_cast<int>(i);
            u -= w[i];
            if (u < 0) {
                return last;
            }
        }
        return last;
    }

    static int sample_index(const std::vector<Amplitude>& amps, SplitMix64& rng) {
        std::vector<double> w(amps.size());
        for (std::size_t i = 0; i < amps.size(); ++i) {
            w[i] = std::norm(amps[i]);
        }
        return sample_weights(w, rng);
    }

    const GeneratorOptions& o_;
    std::vector<Branch> branches_;
    int n_max_ = 1;
    Eigen::Matrix2cd bs1_;
    Eigen::Matrix2cd bs2_;
    std::vector<std::vector<Amplitude>> after_bs1_;
    std::vector<Amplitude> t2_;
    std::vector<Amplitude> long_;
    int unique_long_ = 0;
    double p_long_to_d1_ = 0;
    double p_short_to_d1_ = 0;
    double p_to_long_ = 0;
};

}  // namespace

std::uint64_t SplitMix64::mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SplitMix64::result_type SplitMix64::operator()() {
    state_ += kGolden;
    return mix(state_);
}

double SplitMix64::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double SplitMix64::normal() {
    double u1 = uniform();
    while (u1 <= 0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
}

SplitMix64 chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
    return SplitMix64(SplitMix64::mix(seed + kGolden * (chunk + 1)));
}

void DriftModel::validate() const {
    if (!(period >= 0) || !std::isfinite(period)) {
        throw std::invalid_argument("DriftModel: period must be >= 0");
    }
    if (!(step >= 0) || !std::isfinite(step)) {
        throw std::invalid_argument("DriftModel: step must be >= 0");
    }
    if (!std::isfinite(offset)) {
        throw std::invalid_argument("DriftModel: offset must be finite");
    }
}

std::string to_string(DriftModel::Kind k) { return k == DriftModel::Kind::kSinusoid ? "sinusoid" : "random-walk"; }

DriftModel::Kind drift_kind_from_string(const std::string& s) {
    if (s == "sinusoid") {
        return DriftModel::Kind::kSinusoid;
    }
    if (s == "random-walk") {
        return DriftModel::Kind::kRandomWalk;
    }
    throw std::invalid_argument("unknown drift kind '" + s + "'");
}

void to_json(nlohmann::json& j, const DriftModel& d) {
    j = {{"kind", to_string(d.kind)}, {"period", d.period}, {"step", d.step}, {"offset", d.offset}, {"seed", d.seed}};
}

void from_json(const nlohmann::json& j, DriftModel& d) {
    d = DriftModel{};
    if (j.contains("kind")) {
        d.kind = drift_kind_from_string(j.at("kind").get<std::string>());
    }
    d.period = j.value("period", d.period);
    d.step = j.value("step", d.step);
    d.offset = j.value("offset", d.offset);
    d.seed = j.value("seed", d.seed);
    d.validate();
}

std::vector<double> drift_phases(const DriftModel& drift, std::uint64_t n_pulses) {
    drift.validate();
    std::vector<double> phi(n_pulses);
    if (drift.kind == DriftModel::Kind::kSinusoid) {
        const double period = drift.period > 0 ? drift.period : static_cast<double>(std::max<std::uint64_t>(1, n_pulses));
        for (std::uint64_t t = 0; t < n_pulses; ++t) {
            phi[t] = drift.offset + 2 * std::numbers::pi * static_cast<double>(t) / period;
        }
        return phi;
    }
    SplitMix64 rng(SplitMix64::mix(drift.seed));
    double p = drift.offset;
    for (std::uint64_t t = 0; t < n_pulses; ++t) {
        phi[t] = p;
        p += drift.step * rng.normal();
    }
    return phi;
}

void GeneratorOptions::validate() const {
    source.validate();
    drift.validate();
    if (!(eta1 > 0 && eta1 <= 1 && eta2 > 0 && eta2 <= 1)) {
        throw std::invalid_argument("GeneratorOptions: detector efficiencies must be in (0, 1]");
    }
    if (!(r1 > 0 && r1 < 1 && r2 > 0 && r2 < 1)) {
        throw std::invalid_argument("GeneratorOptions: reflectivities must be in (0, 1)");
    }
    if (pulse_period_ps == 0) {
        throw std::invalid_argument("GeneratorOptions: pulse period must be positive");
    }
}

void to_json(nlohmann::json& j, const GeneratorOptions& o) {
    j = {{"source", o.source},   {"drift", o.drift}, {"n_pulses", o.n_pulses},
         {"eta1", o.eta1},       {"eta2", o.eta2},   {"pulse_period_ps", o.pulse_period_ps},
         {"r1", o.r1},           {"r2", o.r2},       {"perpendicular", o.perpendicular},
         {"seed", o.seed}};
}

void from_json(const nlohmann::json& j, GeneratorOptions& o) {
    o = GeneratorOptions{};
    if (j.contains("source")) {
        o.source = j.at("source").get<SourcePulseSpec>();
    }
    if (j.contains("drift")) {
        o.drift = j.at("drift").get<DriftModel>();
    }
    o.n_pulses = j.value("n_pulses", o.n_pulses);
    o.eta1 = j.value("eta1", o.eta1);
    o.eta2 = j.value("eta2", o.eta2);
    o.pulse_period_ps = j.value("pulse_period_ps", o.pulse_period_ps);
    o.r1 = j.value("r1", o.r1);
    o.r2 = j.value("r2", o.r2);
    o.perpendicular = j.value("perpendicular", o.perpendicular);
    o.seed = j.value("seed", o.seed);
    o.validate();
}

BinCounts generate_counts(const GeneratorOptions& o) {
    o.validate();
    const std::vector<double> phi = drift_phases(o.drift, o.n_pulses);
    Sampler sampler(o);
    BinCounts c;
    c.n1.resize(o.n_pulses);
    c.n2.resize(o.n_pulses);
    // The conditional long-arm state links consecutive bins, so chunks run in
    // order; each chunk still draws from its own counter-based stream.
    for (std::uint64_t start = 0, chunk = 0; start < o.n_pulses; start += kChunkPulses, ++chunk) {
        SplitMix64 rng = chunk_rng(o.seed, chunk);
        const std::uint64_t end = std::min(o.n_pulses, start + kChunkPulses);
        for (std::uint64_t t = start; t < end; ++t) {
            auto [a, b] = sampler.step(phi[t], rng);
            c.n1[t] = static_cast<std::uint8_t>(binomial_sample(a, o.eta1, rng));
            c.n2[t] = static_cast<std::uint8_t>(binomial_sample(b, o.eta2, rng));
        }
    }
    return c;
}

TimeTagStream counts_to_stream(const BinCounts& counts, std::uint64_t pulse_period_ps) {
    TimeTagStream s;
    for (std::uint64_t t = 0; t < counts.size(); ++t) {
        const std::uint64_t ts = t * pulse_period_ps;
        for (int k = 0; k < counts.n1[t]; ++k) {
            s.push_back({1, ts});
        }
        for (int k = 0; k < counts.n2[t]; ++k) {
            s.push_back({2, ts});
        }
    }
    return s;
}

TimeTagStream generate_stream(const GeneratorOptions& options) {
    return counts_to_stream(generate_counts(options), options.pulse_period_ps);
}

TimeTagStream generate_stream(const SourcePulseSpec& source, const DriftModel& drift, std::uint64_t n_pulses,
                              double eta, std::uint64_t pulse_period_ps) {
    GeneratorOptions o;
    o.source = source;
    o.drift = drift;
    o.n_pulses = n_pulses;
    o.eta1 = eta;
    o.eta2 = eta;
    o.pulse_period_ps = pulse_period_ps;
    return generate_stream(o);
}

}  // namespace fockhom
