#include "kljn/cli.hpp"
#include "kljn/circuit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace kljn {

bool AuditResult::pass() const
{
    return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const AuditRow& r) { return r.pass; });
}

AuditResult audit_physics(const Experiment& experiment, std::uint64_t seed, std::size_t samples,
                          double tolerance, double variance_bias)
{
    experiment.validate();
    const auto start = std::chrono::steady_clock::now();
    const double D = experiment.physics.noise_scale_D;
    const auto& A = experiment.parties.alice;
    const auto& B = experiment.parties.bob;
    const RngStream root(seed);

    AuditResult out;
    const State states[] = {State::LL, State::LH, State::HL, State::HH};
    for (std::size_t s = 0; s < 4; ++s) {
        const State state = states[s];
        const double R_A = A.resistance(alice_of(state));
        const double R_B = B.resistance(bob_of(state));
        const double sum = R_A + R_B;

        const double scale = D * (1.0 + variance_bias);
        const Emf e_A{gaussian_noise(root.child({s, 0}), scale * R_A, samples), A.dc_volt};
        const Emf e_B{gaussian_noise(root.child({s, 1}), scale * R_B, samples), B.dc_volt};
        const auto loop = solve_single_loop(e_A, R_A, e_B, R_B);

        const double var_i = D / sum;
        const double var_u = D * R_A * R_B / sum;
        const double dc_i = (A.dc_volt - B.dc_volt) / sum;
        const double dc_u = (A.dc_volt * R_B + B.dc_volt * R_A) / sum;

        auto add = [&](const char* name, double analytic, double simulated, double scale_ref) {
            const double err = std::abs(simulated - analytic) / scale_ref;
            out.rows.push_back({state, name, analytic, simulated, err, err <= tolerance});
        };
        add("var_i", var_i, ac_variance(loop.i_wire), var_i);
        add("var_u", var_u, ac_variance(loop.u_wire), var_u);
        add("dc_i", dc_i, mean(loop.i_wire), std::max(std::abs(dc_i), std::sqrt(var_i)));
        add("dc_u", dc_u, mean(loop.u_wire), std::max(std::abs(dc_u), std::sqrt(var_u)));
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace kljn
