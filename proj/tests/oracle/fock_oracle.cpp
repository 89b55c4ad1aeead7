// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fock_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

cd permanent(const Eigen::MatrixXcd& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) {
        return 1;
    }
    cd total = 0;
    for (unsigned s = 1; s < (1u << n); ++s) {
        cd prod = 1;
        for (int i = 0; i < n; ++i) {
            cd row = 0;
            for (int j = 0; j < n; ++j) {
                if (s & (1u << j)) {
                    row += a(i, j);
                }
            }
            prod *= row;
        }
        total += (std::popcount(s) % 2 == n % 2 ? 1.0 : -1.0) * prod;
    }
    return total;
}

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

std::vector<int> expand(const Occ& occ) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        for (int k = 0; k < occ[i]; ++k) {
            idx.push_back(static_cast<int>(i));
        }
    }
    return idx;
}

}  // namespace

cd transition_amplitude(const Eigen::MatrixXcd& u, const Occ& in, const Occ& out) {
    const auto cols = expand(in);
    const auto rows = expand(out);
    if (cols.size() != rows.size()) {
        return 0;
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXcd sub(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            sub(r, c) = u(rows[r], cols[c]);
        }
    }
    double norm = 1;
    for (int v : in) norm *= factorial(v);
    for (int v : out) norm *= factorial(v);
    return permanent(sub) / std::sqrt(norm);
}

std::vector<Occ> occupations(int modes, int photons) {
    std::vector<Occ> all;
    Occ cur(static_cast<std::size_t>(modes), 0);
    std::function<void(int, int)> rec = [&](int mode, int left) {
        if (mode == modes - 1) {
            cur[static_cast<std::size_t>(mode)] = left;
            all.push_back(cur);
            return;
        }
        for (int k = left; k >= 0; --k) {
            cur[static_cast<std::size_t>(mode)] = k;
            rec(mode + 1, left - k);
        }
    };
    if (modes > 0) {
        rec(0, photons);
    }
    std::sort(all.begin(), all.end());
    return all;
}

std::map<Occ, cd> evolve(const Eigen::MatrixXcd& u, const std::map<Occ, cd>& in) {
    std::map<Occ, cd> out;
    std::map<int, std::vector<Occ>> by_count;
    for (const auto& [occ, amp] : in) {
        int n = 0;
        for (int v : occ) n += v;
        auto& outs = by_count[n];
        if (outs.empty()) {
            outs = occupations(static_cast<int>(u.rows()), n);
        }
        for (const auto& o : outs) {
            cd a = transition_amplitude(u, occ, o);
            if (a != cd(0)) {
                out[o] += amp * a;
            }
        }
    }
    return out;
}

// --- interferometer ----------------------------------------------------------

namespace {

using Monomial = std::vector<int>;  // sorted creation-operator mode indices
using Poly = std::map<Monomial, cd>;

Poly multiply(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            Monomial m;
            m.reserve(ma.size() + mb.size());
            std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
            out[m] += ca * cb;
        }
    }
    return out;
}

Poly power(const Poly& linear, int n) {
    Poly out{{Monomial{}, 1.0}};
    for (int k = 0; k < n; ++k) {
        out = multiply(out, linear);
    }
    return out;
}

}  // namespace

double MziMoments::area(int a, int b, int k) const {
    const int t = k >= 0 ? 1 : window - 1;
    auto it = g.find({a, b, t, t + k});
    if (it == g.end()) {
        throw std::out_of_range("oracle: peak outside the window");
    }
    return it->second;
}

MziMoments mzi_moments(const Pulse& pulse, double phi, bool perpendicular, int window, double eta1, double eta2) {
    const int bins = window + 1;
    const int internal = 2 * (window + 1);  // (wavepacket, polarization)
    auto mode = [&](int det, int bin, int packet, int pol) {
        return ((det - 1) * bins + bin) * internal + packet * 2 + pol;
    };
    const cd i(0, 1);
    const cd e = std::exp(i * phi);
    const int pol_long = perpendicular ? 1 : 0;
    // One photon of pulse t in wavepacket `packet`.
    auto photon = [&](int t, int packet) {
        Poly p;
        p[{mode(2, t, packet, 0)}] += 0.5;
        p[{mode(1, t, packet, 0)}] += 0.5 * i;
        p[{mode(2, t + 1, packet, pol_long)}] += -0.5 * e;
        p[{mode(1, t + 1, packet, pol_long)}] += 0.5 * i * e;
        return p;
    };
    const double pn[3] = {pulse.p0, pulse.p1, pulse.p2};
    const double w_shared = std::sqrt(pulse.m);

    MziMoments out;
    out.window = window;
    // Millions of small terms: accumulate in extended precision.
    std::vector<long double> mean(static_cast<std::size_t>(2 * bins), 0.0L);
    std::vector<long double> e2(static_cast<std::size_t>(4 * bins * bins), 0.0L);
    auto acc = [&](int a, int t, int b, int u) -> long double& {
        return e2[static_cast<std::size_t>((((a - 1) * bins + t) * 2 + (b - 1)) * bins + u)];
    };

    auto finish = [&](const Poly& poly, double weight) {
        for (const auto& [mono, c] : poly) {
            long double p = std::norm(c);
            int run = 1;
            for (std::size_t k = 1; k <= mono.size(); ++k) {
                if (k < mono.size() && mono[k] == mono[k - 1]) {
                    ++run;
                } else {
                    p *= factorial(run);
                    run = 1;
                }
            }
            p *= weight;
            if (p == 0) {
                continue;
            }
            std::vector<int> n(static_cast<std::size_t>(2 * bins), 0);
            for (int m : mono) {
                ++n[static_cast<std::size_t>(m / internal)];
            }
            for (int a = 1; a <= 2; ++a) {
                for (int t = 0; t < bins; ++t) {
                    const int na = n[static_cast<std::size_t>((a - 1) * bins + t)];
                    if (na == 0) {
                        continue;
                    }
                    mean[static_cast<std::size_t>((a - 1) * bins + t)] += p * na;
                    for (int b = 1; b <= 2; ++b) {
                        for (int u = 0; u < bins; ++u) {
                            int nb = n[static_cast<std::size_t>((b - 1) * bins + u)];
                            if (a == b && t == u) {
                                nb -= 1;
                            }
                            acc(a, t, b, u) += p * na * nb;
                        }
                    }
                }
            }
        }
    };

    std::function<void(int, const Poly&, double)> rec = [&](int t, const Poly& poly, double weight) {
        if (weight == 0) {
            return;
        }
        if (t == window) {
            finish(poly, weight);
            return;
        }
        if (w_shared > 0) {
            Poly shared;
            for (int n = 0; n <= 2; ++n) {
                if (pn[n] == 0) {
                    continue;
                }
                const cd amp = std::sqrt(pn[n]) * std::exp(i * (n * pulse.alpha)) / std::sqrt(factorial(n));
                for (const auto& [m, c] : power(photon(t, 0), n)) {
                    shared[m] += amp * c;
                }
            }
            rec(t + 1, multiply(poly, shared), weight * w_shared);
        }
        if (w_shared < 1) {
            for (int n = 0; n <= 2; ++n) {
                if (pn[n] == 0) {
                    continue;
                }
                Poly unique = power(photon(t, t + 1), n);
                for (auto& [m, c] : unique) {
                    c /= std::sqrt(factorial(n));
                }
                rec(t + 1, multiply(poly, unique), weight * (1 - w_shared) * pn[n]);
            }
        }
    };
    rec(0, Poly{{Monomial{}, 1.0}}, 1.0);

    const double eta[3] = {0, eta1, eta2};
    for (int a = 1; a <= 2; ++a) {
        for (int t = 0; t < bins; ++t) {
            for (int b = 1; b <= 2; ++b) {
                for (int u = 0; u < bins; ++u) {
                    out.g[{a, b, t, u}] = static_cast<double>(acc(a, t, b, u)) * eta[a] * eta[b];
                }
            }
        }
    }
    for (int t = 0; t < bins; ++t) {
        out.mean1.push_back(static_cast<double>(mean[static_cast<std::size_t>(t)]) * eta1);
        out.mean2.push_back(static_cast<double>(mean[static_cast<std::size_t>(bins + t)]) * eta2);
    }
    return out;
}

}  // namespace oracle
