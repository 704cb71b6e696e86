#include "kljn/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kljn {

std::string_view to_string(Choice c) { return c == Choice::L ? "L" : "H"; }

std::string_view to_string(State s)
{
    switch (s) {
    case State::LL: return "LL";
    case State::LH: return "LH";
    case State::HL: return "HL";
    case State::HH: return "HH";
    }
    return "?";
}

std::optional<Choice> parse_choice(std::string_view text)
{
    if (text == "L")
        return Choice::L;
    if (text == "H")
        return Choice::H;
    return std::nullopt;
}

void PhysicsConfig::validate() const
{
    if (!(noise_scale_D > 0.0) || !std::isfinite(noise_scale_D))
        throw std::invalid_argument("physics.noise_scale_D must be > 0");
    if (samples_per_bep < 2)
        throw std::invalid_argument("physics.samples_per_bep must be >= 2");
    if (!(measurement_noise_rms >= 0.0))
        throw std::invalid_argument("detectors.measurement_noise_rms must be >= 0");
}

void PartyConfig::validate(std::string_view who) const
{
    const std::string prefix(who);
    if (!(r_low > 0.0))
        throw std::invalid_argument(prefix + ".r_low must be > 0");
    if (!(r_low < r_high))
        throw std::invalid_argument(prefix + ".r_low must be < " + prefix + ".r_high");
    if (!std::isfinite(dc_volt) || !std::isfinite(r_high))
        throw std::invalid_argument(prefix + ": values must be finite");
}

}  // namespace kljn
