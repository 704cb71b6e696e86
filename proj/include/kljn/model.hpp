#pragma once

// Domain types shared by the protocol, attack and detector layers.

#include <cstddef>
#include <optional>
#include <string_view>

namespace kljn {

/// Resistor connected by a party for one bit exchange period.
enum class Choice { L, H };

/// Connected-resistor situation, first letter Alice's, second Bob's.
enum class State { LL, LH, HL, HH };

enum class Side { alice, bob };

inline Choice other(Choice c) { return c == Choice::L ? Choice::H : Choice::L; }

inline State make_state(Choice alice, Choice bob)
{
    if (alice == Choice::L)
        return bob == Choice::L ? State::LL : State::LH;
    return bob == Choice::L ? State::HL : State::HH;
}

inline Choice alice_of(State s) { return (s == State::LL || s == State::LH) ? Choice::L : Choice::H; }
inline Choice bob_of(State s) { return (s == State::LL || s == State::HL) ? Choice::L : Choice::H; }

inline bool is_secure(State s) { return s == State::LH || s == State::HL; }

std::string_view to_string(Choice c);
std::string_view to_string(State s);
std::optional<Choice> parse_choice(std::string_view text);

/// Johnson-noise constants folded into one scale plus sampling.
///
/// A resistor R contributes i.i.d. Gaussian samples of variance
/// noise_scale_D * R (V^2); noise_scale_D stands for 4 k T_eff B.
struct PhysicsConfig {
    double noise_scale_D = 1e-6;
    std::size_t samples_per_bep = 2000;
    double measurement_noise_rms = 0.0;

    void validate() const;
};

/// One party's resistor pair and its parasitic series DC source.
struct PartyConfig {
    double r_low = 1e3;
    double r_high = 1e4;
    double dc_volt = 0.0;

    double resistance(Choice c) const { return c == Choice::L ? r_low : r_high; }
    void validate(std::string_view who) const;
};

}  // namespace kljn
