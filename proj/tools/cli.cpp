// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "fockhom/cnot_study.hpp"
#include "fockhom/entanglement.hpp"
#include "fockhom/errors.hpp"
#include "fockhom/hom.hpp"
#include "fockhom/parallel.hpp"
#include "fockhom/provenance.hpp"
#include "fockhom/timetag_analyze.hpp"
#include "fockhom/timetag_generate.hpp"
#include "fockhom/timetag_io.hpp"

#ifndef FOCKHOM_VERSION
#define FOCKHOM_VERSION "unknown"
#endif

namespace fockhom::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

/// Thrown for anything the user can fix in the config or on the command line.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// --- config layering ---------------------------------------------------------

void merge_into(json& base, const json& over, const std::string& path) {
    for (auto it = over.begin(); it != over.end(); ++it) {
        const std::string key = path + "/" + it.key();
        if (!base.contains(it.key())) {
            throw ConfigError("unknown config key " + key);
        }
        json& slot = base[it.key()];
        if (slot.is_object() && it.value().is_object()) {
            merge_into(slot, it.value(), key);
        } else {
            slot = it.value();
        }
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
}

/// Flags registered on one subcommand. Each flag writes a JSON pointer in the
/// merged config, but only when given on the command line.
class Flags {
   public:
    explicit Flags(CLI::App* app) : app_(app) {
        app_->add_option("-c,--config", config_path_, "JSON config file");
    }

    template <class T>
    CLI::Option* add(const std::string& name, const std::string& pointer, const std::string& help,
                     std::function<json(const T&)> convert = nullptr) {
        auto value = std::make_shared<T>();
        CLI::Option* opt = app_->add_option(name, *value, help);
        setters_.push_back([opt, value, pointer, convert](json& cfg) {
            if (opt->count() > 0) {
                cfg[json::json_pointer(pointer)] = convert ? convert(*value) : json(*value);
            }
        });
        return opt;
    }

    CLI::Option* flag(const std::string& name, const std::string& pointer, const std::string& help) {
        auto value = std::make_shared<bool>(false);
        CLI::Option* opt = app_->add_flag(name, *value, help);
        setters_.push_back([opt, value, pointer](json& cfg) {
            if (opt->count() > 0) {
                cfg[json::json_pointer(pointer)] = *value;
            }
        });
        return opt;
    }

    json resolve(json defaults) const {
        if (!config_path_.empty()) {
            json file = read_json_file(config_path_);
            if (!file.is_object()) {
                throw ConfigError("config " + config_path_ + " is not a JSON object");
            }
            merge_into(defaults, file, "");
        }
        for (const auto& set : setters_) {
            set(defaults);
        }
        return defaults;
    }

   private:
    CLI::App* app_;
    std::string config_path_;
    std::vector<std::function<void(json&)>> setters_;
};

json times_pi(const double& x) { return x * kPi; }

// --- output ------------------------------------------------------------------

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

/// Provenance block shared by every output: version, command, config echo and
/// the circuit-constants hash.
json provenance(const std::string& command, const json& cfg) {
    return {{"tool", "fockhom"},
            {"version", FOCKHOM_VERSION},
            {"command", command},
            {"config", cfg},
            {"circuit_constants_sha1", circuit_constants_hash()}};
}

class CsvWriter {
   public:
    CsvWriter(const std::string& command, const json& cfg, const std::string& header) {
        body_ << "# fockhom " << FOCKHOM_VERSION << ' ' << command << '\n';
        body_ << "# config " << cfg.dump() << '\n';
        body_ << "# circuit_constants_sha1 " << circuit_constants_hash() << '\n';
        body_ << header << '\n';
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            body_ << (i ? "," : "") << fields[i];
        }
        body_ << '\n';
        ++rows_;
    }

    std::size_t rows() const { return rows_; }
    std::string str() const { return body_.str(); }

   private:
    std::ostringstream body_;
    std::size_t rows_ = 0;
};

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

/// Writes a CSV and records its hash in `outputs`.
void emit_csv(const fs::path& dir, const std::string& name, const CsvWriter& csv, json& outputs) {
    const std::string content = csv.str();
    write_file(dir / name, content);
    outputs[name] = {{"rows", csv.rows()}, {"sha1", git_blob_sha1(content)}};
}

/// Summary JSON: everything but "generated_at" goes into "content_sha1".
void emit_summary(const fs::path& path, json summary) {
    summary["content_sha1"] = git_blob_sha1(summary.dump());
    summary["generated_at"] = utc_now();
    write_file(path, summary.dump(2) + "\n");
}

std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 1) {
        throw ConfigError("grid needs at least one step");
    }
    if (steps == 1) {
        return {lo};
    }
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
    }
    return v;
}

std::optional<double> optional_double(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return j.at(key).get<double>();
}

// --- hom-sweep ---------------------------------------------------------------

json hom_defaults() {
    return {{"theta_min_pi", 0.05}, {"theta_max_pi", 1.0}, {"theta_steps", 20},
            {"phi_steps", 25},      {"m_values", {1.0, 0.9, 0.8}},
            {"alpha", 0.0},         {"p2", nullptr},
            {"window", 5},          {"quadrature_points", 64},
            {"eta1", 1.0},          {"eta2", 1.0},
            {"phase_average", true}, {"out_dir", "out"}};
}

void register_hom(Flags& f) {
    f.add<double>("--theta-min", "/theta_min_pi", "smallest pulse area, units of pi");
    f.add<double>("--theta-max", "/theta_max_pi", "largest pulse area, units of pi");
    f.add<int>("--theta-steps", "/theta_steps", "pulse-area grid points");
    f.add<int>("--phi-steps", "/phi_steps", "phase grid points over [0, 2 pi]");
    f.add<std::vector<double>>("--m", "/m_values", "wavepacket overlaps");
    f.add<double>("--p2", "/p2", "two-photon probability");
    f.add<int>("--window", "/window", "pulses per simulated window");
    f.add<int>("--quadrature", "/quadrature_points", "phase points for averages");
    f.add<double>("--eta1", "/eta1", "efficiency of detector 1");
    f.add<double>("--eta2", "/eta2", "efficiency of detector 2");
    f.add<std::string>("-o,--out-dir", "/out_dir", "output directory");
}

int cmd_hom_sweep(const json& cfg, std::ostream& out) {
    const auto thetas = linspace(cfg.at("theta_min_pi").get<double>() * kPi,
                                 cfg.at("theta_max_pi").get<double>() * kPi, cfg.at("theta_steps").get<int>());
    const auto phis = linspace(0, 2 * kPi, cfg.at("phi_steps").get<int>());
    const auto ms = cfg.at("m_values").get<std::vector<double>>();
    if (ms.empty()) {
        throw ConfigError("m_values is empty");
    }
    HomOptions opt;
    opt.window = cfg.at("window").get<int>();
    opt.quadrature_points = cfg.at("quadrature_points").get<int>();
    opt.eta1 = cfg.at("eta1").get<double>();
    opt.eta2 = cfg.at("eta2").get<double>();
    auto source = [&](double theta, double m) {
        SourcePulseSpec s;
        s.theta = theta;
        s.alpha = cfg.at("alpha").get<double>();
        s.m_overlap = m;
        s.p2 = optional_double(cfg, "p2");
        s.validate();
        return s;
    };
    for (double t : thetas) {
        for (double m : ms) {
            source(t, m);
        }
    }

    struct Point {
        double theta, phi, m, g0par, g0perp, gk1, gfar, c1;
    };
    const std::size_t n_phi = phis.size(), n_m = ms.size();
    const auto points = parallel_map<Point>(thetas.size() * n_phi * n_m, [&](std::size_t i) {
        const double theta = thetas[i / (n_phi * n_m)];
        const double phi = phis[(i / n_m) % n_phi];
        const double m = ms[i % n_m];
        const auto s = source(theta, m);
        const auto par = simulate_histogram(s, phi, false, opt);
        const auto perp = simulate_histogram(s, phi, true, opt);
        return Point{theta,
                     phi,
                     m,
                     par.g2(DetectorPair::kD1D2, 0),
                     perp.g2(DetectorPair::kD1D2, 0),
                     par.g2_k1(),
                     par.g2(DetectorPair::kD1D2, 2),
                     coherence_metrics(s).c1};
    });

    const fs::path dir = cfg.at("out_dir").get<std::string>();
    json outputs = json::object();
    CsvWriter surface("hom-sweep", cfg, "theta,phi,m,g2_k0,g2_k1,g2_kfar,vhom,c1,ratio");
    json extrema = {{"g2_kfar_min", INFINITY}, {"g2_kfar_max", -INFINITY}, {"g2_k1_min", INFINITY},
                    {"g2_k1_max", -INFINITY},  {"g2_k0_phi_spread_max", 0.0}};
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>> k0_range;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point& p = points[i];
        surface.row({fmt(p.theta), fmt(p.phi), fmt(p.m), fmt(p.g0par), fmt(p.gk1), fmt(p.gfar),
                     fmt(vhom(p.g0par, p.g0perp)), fmt(p.c1), fmt(p.gk1 / p.gfar)});
        extrema["g2_kfar_min"] = std::min(extrema["g2_kfar_min"].get<double>(), p.gfar);
        extrema["g2_kfar_max"] = std::max(extrema["g2_kfar_max"].get<double>(), p.gfar);
        extrema["g2_k1_min"] = std::min(extrema["g2_k1_min"].get<double>(), p.gk1);
        extrema["g2_k1_max"] = std::max(extrema["g2_k1_max"].get<double>(), p.gk1);
        auto key = std::make_pair(i / (n_phi * n_m), i % n_m);
        auto [it, fresh] = k0_range.try_emplace(key, p.g0par, p.g0par);
        if (!fresh) {
            it->second.first = std::min(it->second.first, p.g0par);
            it->second.second = std::max(it->second.second, p.g0par);
        }
    }
    for (const auto& [key, r] : k0_range) {
        extrema["g2_k0_phi_spread_max"] =
            std::max(extrema["g2_k0_phi_spread_max"].get<double>(), r.second - r.first);
    }
    emit_csv(dir, "hom_surface.csv", surface, outputs);

    if (cfg.at("phase_average").get<bool>()) {
        const auto sums = parallel_map<HomSummary>(thetas.size() * n_m, [&](std::size_t i) {
            return compute_summary(source(thetas[i / n_m], ms[i % n_m]), opt);
        });
        CsvWriter avg("hom-sweep", cfg,
                      "theta,m,p1,c1,g2_k0_par,g2_k0_perp,g2_k1,g2_kfar,vhom,ratio,c1_from_ratio,"
                      "ratio_formula,delta_m,delta_m_formula,vhom_naive");
        double r_min = INFINITY, r_max = -INFINITY;
        for (std::size_t i = 0; i < sums.size(); ++i) {
            const HomSummary& h = sums[i];
            const double m = ms[i % n_m];
            const auto s = source(thetas[i / n_m], m);
            avg.row({fmt(s.theta), fmt(m), fmt(populations(s)[1]), fmt(h.c1_true), fmt(h.g2_k0_par),
                     fmt(h.g2_k0_perp), fmt(h.g2_k1), fmt(h.g2_kfar), fmt(h.v_hom), fmt(h.ratio), fmt(h.c1_est),
                     fmt(ratio_phase_averaged(h.c1_true)), fmt(h.delta_m), fmt(delta_m(h.c1_true, m)),
                     fmt(h.v_hom_naive)});
            r_min = std::min(r_min, h.ratio);
            r_max = std::max(r_max, h.ratio);
        }
        extrema["ratio_min"] = r_min;
        extrema["ratio_max"] = r_max;
        emit_csv(dir, "hom_phase_avg.csv", avg, outputs);
    }

    json summary = provenance("hom-sweep", cfg);
    summary["outputs"] = outputs;
    summary["extrema"] = extrema;
    emit_summary(dir / "hom_summary.json", summary);
    out << "hom-sweep: " << points.size() << " grid points -> " << dir.string() << '\n';
    return kExitOk;
}

// --- cnot --------------------------------------------------------------------

json cnot_defaults() {
    return {{"theta_min_pi", 0.3},  {"theta_max_pi", 1.0}, {"theta_steps", 71},
            {"alpha", {0.0, 0.0, 0.0, 0.0}}, {"incoherent", true},  {"optimize", true},
            {"optimize_theta_steps", 15},   {"grid_points", 8},    {"out_dir", "out"}};
}

void register_cnot(Flags& f) {
    f.add<double>("--theta-min", "/theta_min_pi", "smallest pulse area, units of pi");
    f.add<double>("--theta-max", "/theta_max_pi", "largest pulse area, units of pi");
    f.add<int>("--theta-steps", "/theta_steps", "sweep points");
    f.add<std::vector<double>>("--alpha", "/alpha", "four input phases")->expected(4);
    f.add<int>("--optimize-steps", "/optimize_theta_steps", "pulse areas for the phase search");
    f.add<int>("--grid-points", "/grid_points", "phase grid per input in the search");
    f.add<std::string>("-o,--out-dir", "/out_dir", "output directory");
    f.add<bool>("--optimize", "/optimize", "run the phase search (true/false)");
    f.add<bool>("--incoherent", "/incoherent", "also sweep phase-free inputs (true/false)");
}

std::vector<std::string> cnot_row(double theta, const PhaseConfig& ph, const HeraldedGateResult& r, double p4,
                                  double bayes) {
    return {fmt(theta), fmt(ph.alpha[0]), fmt(ph.alpha[1]), fmt(ph.alpha[2]), fmt(ph.alpha[3]),
            fmt(r.p_herald), fmt(r.fidelity), fmt(p4), fmt(bayes)};
}

json sweep_extrema(const std::vector<SweepPoint>& pts) {
    const auto best = std::max_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.result.p_herald < b.result.p_herald;
    });
    double bayes_dev = 0;
    for (const auto& p : pts) {
        bayes_dev = std::max(bayes_dev, std::abs(p.result.fidelity - p.bayes_f));
    }
    return {{"p_herald_max", best->result.p_herald},
            {"theta_at_max", best->theta},
            {"bayes_max_abs_deviation", bayes_dev}};
}

int cmd_cnot(const json& cfg, std::ostream& out) {
    const auto thetas = linspace(cfg.at("theta_min_pi").get<double>() * kPi,
                                 cfg.at("theta_max_pi").get<double>() * kPi, cfg.at("theta_steps").get<int>());
    for (double t : thetas) {
        if (!(t > 0 && t <= kPi)) {
            throw ConfigError("pulse areas must lie in (0, pi]");
        }
    }
    PhaseConfig phases;
    const auto alpha = cfg.at("alpha").get<std::vector<double>>();
    if (alpha.size() != 4) {
        throw ConfigError("alpha needs four phases");
    }
    std::copy(alpha.begin(), alpha.end(), phases.alpha.begin());

    const fs::path dir = cfg.at("out_dir").get<std::string>();
    json outputs = json::object();
    json extrema;

    auto write_sweep = [&](const std::string& name, InputKind kind) {
        const auto pts = sweep_theta(phases, thetas, kind);
        CsvWriter csv("cnot", cfg, kCnotCsvHeader);
        for (const auto& p : pts) {
            csv.row(cnot_row(p.theta, p.phases, p.result, p.p4, p.bayes_f));
        }
        emit_csv(dir, name, csv, outputs);
        extrema[name] = sweep_extrema(pts);
    };
    write_sweep("cnot_sweep.csv", InputKind::kCoherent);
    if (cfg.at("incoherent").get<bool>()) {
        write_sweep("cnot_incoherent.csv", InputKind::kIncoherent);
    }

    if (cfg.at("optimize").get<bool>()) {
        PhaseSearchOptions search;
        search.grid_points = cfg.at("grid_points").get<int>();
        const auto opt_thetas = linspace(cfg.at("theta_min_pi").get<double>() * kPi,
                                         cfg.at("theta_max_pi").get<double>() * kPi,
                                         cfg.at("optimize_theta_steps").get<int>());
        for (auto [objective, name] : {std::pair{Objective::kMaximize, "cnot_opt_max.csv"},
                                       std::pair{Objective::kMinimize, "cnot_opt_min.csv"}}) {
            const auto optima = parallel_map<PhaseOptimum>(opt_thetas.size(), [&](std::size_t i) {
                return optimize_phases(opt_thetas[i], objective, search);
            });
            CsvWriter csv("cnot", cfg, kCnotCsvHeader);
            json span = json::array();
            for (std::size_t i = 0; i < optima.size(); ++i) {
                const auto inputs = uniform_inputs(opt_thetas[i], optima[i].phases);
                const auto r = run_gate(inputs);
                csv.row(cnot_row(opt_thetas[i], optima[i].phases, r, four_photon_probability(inputs),
                                 bayes_fidelity(inputs, r.p_herald).value));
                span.push_back({{"theta", opt_thetas[i]}, {"p_herald", r.p_herald}});
            }
            emit_csv(dir, name, csv, outputs);
            extrema[name] = span;
        }
    }

    json summary = provenance("cnot", cfg);
    summary["outputs"] = outputs;
    summary["extrema"] = extrema;
    emit_summary(dir / "cnot_summary.json", summary);
    out << "cnot: " << thetas.size() << " pulse areas -> " << dir.string() << '\n';
    return kExitOk;
}

// --- timetag-gen -------------------------------------------------------------

json gen_defaults() {
    GeneratorOptions o;
    o.source.theta = kPi / 2;
    json j = o;
    j["out"] = "stream.bin";
    return j;
}

void register_gen(Flags& f) {
    f.add<double>("--theta", "/source/theta", "pulse area, units of pi", times_pi);
    f.add<double>("--alpha", "/source/alpha", "laser phase");
    f.add<double>("--m", "/source/m", "wavepacket overlap");
    f.add<double>("--p2", "/source/p2", "two-photon probability");
    f.add<std::string>("--drift", "/drift/kind", "sinusoid or random-walk");
    f.add<double>("--drift-period", "/drift/period", "pulses per phase cycle, 0 = stream length");
    f.add<double>("--drift-step", "/drift/step", "random-walk step, radians per pulse");
    f.add<double>("--drift-offset", "/drift/offset", "initial phase");
    f.add<std::uint64_t>("--drift-seed", "/drift/seed", "random-walk seed");
    f.add<std::uint64_t>("-n,--pulses", "/n_pulses", "number of pulses");
    f.add<double>("--eta1", "/eta1", "efficiency of detector 1");
    f.add<double>("--eta2", "/eta2", "efficiency of detector 2");
    f.add<std::uint64_t>("--period-ps", "/pulse_period_ps", "pulse period in ps");
    f.flag("--perpendicular", "/perpendicular", "rotate the long-arm polarization");
    f.add<std::uint64_t>("--seed", "/seed", "sampler seed");
    f.add<std::string>("-o,--out", "/out", "stream path (.csv or binary)");
}

int cmd_timetag_gen(const json& cfg, std::ostream& out) {
    json opts_json = cfg;
    opts_json.erase("out");
    GeneratorOptions opts = opts_json.get<GeneratorOptions>();
    const fs::path path = cfg.at("out").get<std::string>();
    const auto stream = generate_stream(opts);
    write_stream(path, stream);

    std::ifstream in(path, std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json side = provenance("timetag-gen", cfg);
    side["records"] = stream.size();
    side["format"] = format_for_path(path) == TimeTagFormat::kCsv ? "csv" : "binary";
    side["stream_sha1"] = git_blob_sha1(bytes);
    emit_summary(fs::path(path.string() + ".json"), side);
    out << "timetag-gen: " << stream.size() << " records -> " << path.string() << '\n';
    return kExitOk;
}

// --- timetag-analyze ---------------------------------------------------------

json analyze_defaults() {
    json j = AnalysisOptions{};
    j["input"] = "";
    j["perpendicular"] = nullptr;
    j["out"] = "report.json";
    j["blocks_csv"] = nullptr;
    return j;
}

void register_analyze(Flags& f) {
    f.add<std::string>("-i,--input", "/input", "parallel stream");
    f.add<std::string>("--perpendicular", "/perpendicular", "perpendicular stream (for M)");
    f.add<std::uint64_t>("--period-ps", "/pulse_period_ps", "pulse period in ps");
    f.add<std::uint64_t>("--block-length", "/block_length", "pulses per block");
    f.add<int>("--phase-bins", "/phase_bins", "phase bins over [0, pi]");
    f.add<double>("--c1", "/c1", "known c1 for phase inference");
    f.add<double>("--efficiency-ratio", "/efficiency_ratio", "known eta1/eta2");
    f.add<int>("--bootstrap", "/bootstrap_samples", "bootstrap resamples");
    f.add<std::uint64_t>("--bootstrap-seed", "/bootstrap_seed", "bootstrap seed");
    f.add<std::string>("-o,--out", "/out", "report path");
    f.add<std::string>("--blocks-csv", "/blocks_csv", "per-block phase table");
}

json file_info(const fs::path& path, const TimeTagStream& stream) {
    std::ifstream in(path, std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return {{"path", path.string()}, {"records", stream.size()}, {"sha1", git_blob_sha1(bytes)}};
}

int cmd_timetag_analyze(const json& cfg, std::ostream& out) {
    json opts_json = cfg;
    for (const char* k : {"input", "perpendicular", "out", "blocks_csv"}) {
        opts_json.erase(k);
    }
    const AnalysisOptions opts = opts_json.get<AnalysisOptions>();
    const std::string input = cfg.at("input").get<std::string>();
    if (input.empty()) {
        throw ConfigError("no input stream given");
    }
    if (!fs::exists(input)) {
        throw ConfigError("input stream " + input + " does not exist");
    }
    const auto par = read_stream(input);
    json inputs = {{"parallel", file_info(input, par)}};
    std::optional<TimeTagStream> perp;
    if (!cfg.at("perpendicular").is_null()) {
        const std::string p = cfg.at("perpendicular").get<std::string>();
        perp = read_stream(p);
        inputs["perpendicular"] = file_info(p, *perp);
    }
    const auto est = estimate_parameters(par, perp ? &*perp : nullptr, opts);

    json report = provenance("timetag-analyze", cfg);
    report["inputs"] = inputs;
    report["estimate"] = est.to_json();
    report["report_sha1"] = git_blob_sha1(report.dump());
    const std::string hash = report["report_sha1"];
    write_file(cfg.at("out").get<std::string>(), report.dump(2) + "\n");

    if (!cfg.at("blocks_csv").is_null()) {
        CsvWriter csv("timetag-analyze", cfg, "block,first_bin,singles1,singles2,imbalance,phi_hat,flagged");
        for (const auto& b : est.blocks) {
            csv.row({std::to_string(b.block), std::to_string(b.first_bin), fmt(b.singles1), fmt(b.singles2),
                     fmt(b.imbalance), fmt(b.phi_hat), b.flagged ? "1" : "0"});
        }
        write_file(cfg.at("blocks_csv").get<std::string>(), csv.str());
    }
    out << "c1 = " << fmt(est.c1.value) << " +/- " << fmt(est.c1.sigma) << '\n';
    out << "ratio = " << fmt(est.ratio.value) << " +/- " << fmt(est.ratio.sigma) << '\n';
    if (est.m) {
        out << "M = " << fmt(est.m->value) << " +/- " << fmt(est.m->sigma) << '\n';
    }
    out << "report_sha1 " << hash << '\n';
    return kExitOk;
}

// --- concurrence -------------------------------------------------------------

json concurrence_defaults() {
    return {{"phi", 0.0},
            {"weights", {{"lu", 1.0}, {"uu", 1.0}, {"ll", 1.0}, {"ul", 0.0}}},
            {"s", nullptr},
            {"theta_pi", nullptr},
            {"m", 1.0},
            {"out", nullptr}};
}

void register_concurrence(Flags& f) {
    f.add<double>("--phi", "/phi", "interferometer phase");
    f.add<double>("--w-lu", "/weights/lu", "LU branch weight");
    f.add<double>("--w-uu", "/weights/uu", "UU branch weight");
    f.add<double>("--w-ll", "/weights/ll", "LL branch weight");
    f.add<double>("--w-ul", "/weights/ul", "UL branch weight");
    f.add<double>("--s", "/s", "coherence scale of the mixed state");
    f.add<double>("--theta", "/theta_pi", "take s from the |k|=1 oscillation at this pulse area (units of pi)");
    f.add<double>("--m", "/m", "wavepacket overlap for --theta");
    f.add<std::string>("-o,--out", "/out", "also write the result here");
}

int cmd_concurrence(const json& cfg, std::ostream& out) {
    const double phi = cfg.at("phi").get<double>();
    const json& w = cfg.at("weights");
    BranchWeights weights{w.at("lu").get<double>(), w.at("uu").get<double>(), w.at("ll").get<double>(),
                          w.at("ul").get<double>()};
    const auto state = postselected_state(phi, weights);
    json result = provenance("concurrence", cfg);
    result["state"] = state.to_json();
    result["concurrence_pure"] = concurrence(state);

    std::optional<double> s = optional_double(cfg, "s");
    if (auto theta = optional_double(cfg, "theta_pi")) {
        if (s) {
            throw ConfigError("give either s or theta_pi, not both");
        }
        SourcePulseSpec src;
        src.theta = *theta * kPi;
        src.m_overlap = cfg.at("m").get<double>();
        src.validate();
        s = k1_oscillation_amplitude(src);
        result["s_source"] = "k1_oscillation";
    }
    if (s) {
        if (!(*s >= -1e-12 && *s <= 1 + 1e-12)) {
            throw ConfigError("s must lie in [0, 1]");
        }
        const double sc = std::clamp(*s, 0.0, 1.0);
        result["s"] = sc;
        result["concurrence_mixed"] = concurrence(postselected_density(phi, sc));
        result["concurrence_from_s"] = concurrence_from_s(sc);
    }
    const std::string text = result.dump(2) + "\n";
    if (!cfg.at("out").is_null()) {
        write_file(cfg.at("out").get<std::string>(), text);
    }
    out << text;
    return kExitOk;
}

// --- dispatch ----------------------------------------------------------------

struct Command {
    std::string name;
    std::string help;
    std::function<json()> defaults;
    std::function<void(Flags&)> register_flags;
    std::function<int(const json&, std::ostream&)> run;
};

std::vector<Command> commands() {
    return {
        {"hom-sweep", "correlation peaks over pulse area, phase and overlap", hom_defaults, register_hom,
         cmd_hom_sweep},
        {"cnot", "heralded CNOT efficiency and fidelity sweeps", cnot_defaults, register_cnot, cmd_cnot},
        {"timetag-gen", "synthetic time-tag stream", gen_defaults, register_gen, cmd_timetag_gen},
        {"timetag-analyze", "estimate c1, the peak ratio and M from streams", analyze_defaults, register_analyze,
         cmd_timetag_analyze},
        {"concurrence", "concurrence of the post-selected path-time state", concurrence_defaults,
         register_concurrence, cmd_concurrence},
    };
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"fockhom: photon-number coherence and HOM simulation tools", "fockhom"};
    app.set_version_flag("--version", FOCKHOM_VERSION);
    app.require_subcommand(1);
    bool print_config = false;
    app.add_flag("--print-config", print_config, "print the resolved config and exit");

    const auto cmds = commands();
    std::vector<std::unique_ptr<Flags>> flags;
    std::vector<CLI::App*> subs;
    for (const auto& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        flags.push_back(std::make_unique<Flags>(sub));
        c.register_flags(*flags.back());
        subs.push_back(sub);
    }

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    for (std::size_t i = 0; i < cmds.size(); ++i) {
        if (!subs[i]->parsed()) {
            continue;
        }
        const Command& c = cmds[i];
        try {
            const json cfg = flags[i]->resolve(c.defaults());
            if (print_config) {
                out << cfg.dump(2) << '\n';
                return kExitOk;
            }
            return c.run(cfg, out);
        } catch (const NumericalContractError& e) {
            err << "fockhom " << c.name << ": numerical contract violated: " << e.what() << '\n';
            return kExitNumerical;
        } catch (const ConfigError& e) {
            err << "fockhom " << c.name << ": config error: " << e.what() << '\n';
        } catch (const InputFormatError& e) {
            err << "fockhom " << c.name << ": input error: " << e.what() << '\n';
        } catch (const EstimationError& e) {
            err << "fockhom " << c.name << ": estimation failed: " << e.what() << '\n';
        } catch (const json::exception& e) {
            err << "fockhom " << c.name << ": config error: " << e.what() << '\n';
        } catch (const std::invalid_argument& e) {
            err << "fockhom " << c.name << ": invalid argument: " << e.what() << '\n';
        } catch (const std::domain_error& e) {
            err << "fockhom " << c.name << ": invalid argument: " << e.what() << '\n';
        } catch (const fs::filesystem_error& e) {
            err << "fockhom " << c.name << ": " << e.what() << '\n';
        } catch (const std::exception& e) {
            err << "fockhom " << c.name << ": " << e.what() << '\n';
            return 1;
        }
        return kExitConfig;
    }
    return kExitConfig;
}

}  // namespace fockhom::cli
