// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

// Solves the NS block angles and writes fockhom/ns_gate_constants.hpp.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fockhom/errors.hpp"
#include "fockhom/ns_gate_solver.hpp"

namespace {

std::string header(const fockhom::NsGateAngles& a) {
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    std::ostringstream s;
    s << "// Generated by tools/solve_ns_gate. Regenerate instead of editing by hand.\n"
         "//\n"
         "// Rotation angles (radians) of the NS block R(a1,a2; c) R(s,a1; b) R(a1,a2; a),\n"
         "// solved for A0 = A1 = -A2 = sqrt((3 - sqrt 2) / 7).\n"
         "\n"
         "#ifndef FOCKHOM_NS_GATE_CONSTANTS_HPP\n"
         "#define FOCKHOM_NS_GATE_CONSTANTS_HPP\n"
         "\n"
         "namespace fockhom::ns_constants {\n"
         "\n"
         "inline constexpr int kVersion = 1;\n"
      << "inline constexpr double kAngleA = " << num(a.a) << ";\n"
      << "inline constexpr double kAngleB = " << num(a.b) << ";\n"
      << "inline constexpr double kAngleC = " << num(a.c) << ";\n"
      << "\n"
         "}  // namespace fockhom::ns_constants\n"
         "\n"
         "#endif\n";
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solve the NS-gate rotation angles and emit the constants header", "solve_ns_gate"};
    std::string out;
    std::vector<double> start{0.6, 4.3, 0.3};
    double tolerance = 1e-9;
    app.add_option("-o,--out", out, "header path (stdout when omitted)");
    app.add_option("--start", start, "initial angles a b c")->expected(3);
    app.add_option("--tolerance", tolerance, "largest accepted residual");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto r = fockhom::solve_ns_gate({start[0], start[1], start[2]}, tolerance);
        std::cerr << "residual " << r.max_residual << " after " << r.evaluations << " simplex evaluations\n";
        const std::string text = header(r.angles);
        if (out.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(out);
            f << text;
            if (!f) {
                std::cerr << "cannot write " << out << '\n';
                return 2;
            }
        }
    } catch (const fockhom::NumericalContractError& e) {
        std::cerr << "solve failed: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
