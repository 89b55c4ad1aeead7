// Generated by tools/solve_ns_gate. Regenerate instead of editing by hand.
//
// Rotation angles (radians) of the NS block R(a1,a2; c) R(s,a1; b) R(a1,a2; a),
// solved for A0 = A1 = -A2 = sqrt((3 - sqrt 2) / 7).

#ifndef FOCKHOM_NS_GATE_CONSTANTS_HPP
#define FOCKHOM_NS_GATE_CONSTANTS_HPP

namespace fockhom::ns_constants {

inline constexpr int kVersion = 1;
inline constexpr double kAngleA = 0.57185887020121018;
inline constexpr double kAngleB = 4.2853103939922139;
inline constexpr double kAngleC = 0.26052658253549765;

}  // namespace fockhom::ns_constants

#endif
