// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_TIMETAG_GENERATE_HPP
#define FOCKHOM_TIMETAG_GENERATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fockhom/source.hpp"
#include "fockhom/timetag_io.hpp"

namespace fockhom {

/// Counter-based generator: output i of a stream is a pure function of
/// (seed, i), so chunks can be generated in any order.
class SplitMix64 {
   public:
    using result_type = std::uint64_t;
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal (Box-Muller, one value per call).
    double normal();

    static std::uint64_t mix(std::uint64_t z);

   private:
    std::uint64_t state_;
};

/// Generator for chunk `chunk` of the stream seeded by `seed`.
SplitMix64 chunk_rng(std::uint64_t seed, std::uint64_t chunk);

/// Slow relative phase of the interferometer arms.
struct DriftModel {
    enum class Kind {
        /// phi(t) = offset + 2 pi t / period: singles oscillate sinusoidally.
        kSinusoid,
        /// phi(t + 1) = phi(t) + step * N(0, 1), phi(0) = offset.
        kRandomWalk,
    };
    Kind kind = Kind::kSinusoid;
    /// Pulses per phase cycle; 0 means one cycle over the whole stream.
    double period = 0;
    /// Radians per pulse (random walk).
    double step = 1e-3;
    double offset = 0;
    std::uint64_t seed = 1;

    void validate() const;
};

std::string to_string(DriftModel::Kind k);
DriftModel::Kind drift_kind_from_string(const std::string& s);
void to_json(nlohmann::json& j, const DriftModel& d);
void from_json(const nlohmann::json& j, DriftModel& d);

/// Phase at every pulse index 0..n_pulses-1.
std::vector<double> drift_phases(const DriftModel& drift, std::uint64_t n_pulses);

struct GeneratorOptions {
    SourcePulseSpec source;
    DriftModel drift;
    std::uint64_t n_pulses = 1'000'000;
    double eta1 = 1;
    double eta2 = 1;
    std::uint64_t pulse_period_ps = 12'300;
    double r1 = 0.5;
    double r2 = 0.5;
    /// Long arm polarization rotated: no interference at the second splitter.
    bool perpendicular = false;
    std::uint64_t seed = 1;

    void validate() const;
};

void to_json(nlohmann::json& j, const GeneratorOptions& o);
void from_json(const nlohmann::json& j, GeneratorOptions& o);

/// Photon counts per output bin (bin t collects the short arm of pulse t and
/// the long arm of pulse t - 1). Detectors resolve photon number.
struct BinCounts {
    std::vector<std::uint8_t> n1;
    std::vector<std::uint8_t> n2;
    std::uint64_t size() const { return n1.size(); }
};

/// Samples bin counts from the exact output distribution of the MZI, one bin
/// at a time, carrying the conditional state of the long arm forward. Each
/// photon is then kept with probability eta of its detector.
BinCounts generate_counts(const GeneratorOptions& options);

/// One record per detected photon at timestamp bin * pulse_period_ps.
TimeTagStream counts_to_stream(const BinCounts& counts, std::uint64_t pulse_period_ps);

TimeTagStream generate_stream(const GeneratorOptions& options);
TimeTagStream generate_stream(const SourcePulseSpec& source, const DriftModel& drift, std::uint64_t n_pulses,
                              double eta, std::uint64_t pulse_period_ps);

}  // namespace fockhom

#endif
