#pragma once

// Closed-form per-sample solvers for the loop topologies: the intact loop,
// a party terminated by an ideal current or voltage source, and the intact
// loop with a current injected at the (ideal, zero-resistance) wire.
//
// Sign conventions: loop and wire currents are positive from Alice toward
// Bob. A port current returned by the driven solvers is positive flowing
// out of the party's terminal. Injected current is positive into the node.

#include "kljn/signals.hpp"

namespace kljn {

/// A party's electromotive force: zero-mean noise plus a parasitic DC level.
struct Emf {
    TimeSeries noise;
    double dc = 0.0;

    double total(std::size_t k) const { return noise[k] + dc; }
    std::size_t size() const { return noise.size(); }
};

/// What one end of the wire observes.
struct EndView {
    TimeSeries u;  ///< volts, wire to ground at this end
    TimeSeries i;  ///< amperes, positive Alice toward Bob
};

struct LoopSolution {
    TimeSeries u_wire;
    TimeSeries i_wire;

    // Ideal wire: both ends see the same waveforms.
    EndView alice_view() const { return {u_wire, i_wire}; }
    EndView bob_view() const { return {u_wire, i_wire}; }
};

struct DrivenPort {
    TimeSeries u_terminal;  ///< voltage at the party's terminal
    TimeSeries i;           ///< current out of the party's terminal
    TimeSeries u_source;    ///< voltage across Eve's generator branch
};

struct InjectionSolution {
    TimeSeries i_A;     ///< Alice toward node
    TimeSeries i_B;     ///< node toward Bob
    TimeSeries u_node;
};

LoopSolution solve_single_loop(const Emf& e_A, double R_A, const Emf& e_B, double R_B);

/// Party terminated by an ideal current source. A voltage source in series
/// with the current source only changes the voltage across Eve's branch.
DrivenPort solve_current_driven(const Emf& e, double R, const TimeSeries& i_drive,
                                double series_volt = 0.0);

/// Party terminated by an ideal zero-impedance voltage source.
DrivenPort solve_voltage_driven(const Emf& e, double R, const TimeSeries& u_drive);

InjectionSolution solve_injection(const Emf& e_A, double R_A, const Emf& e_B, double R_B,
                                  const TimeSeries& i_inj);

double dc_loop_current(double U_DCA, double U_DCB, double R_A, double R_B);
double dc_wire_voltage(double U_DCA, double U_DCB, double R_A, double R_B);

}  // namespace kljn
