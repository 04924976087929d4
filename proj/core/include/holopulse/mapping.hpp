#pragma once

#include <array>
#include <string>
#include <string_view>

#include "holopulse/errors.hpp"
#include "holopulse/gate.hpp"

// Hardware-facing utilities: the dispersive effective two-qubit coupling
// strength and the assignment of the abstract (|0>, |e>, |1>) basis to
// concrete platform levels.

namespace holopulse {

struct TransmonParams {
    double g = 0.0;                // bare qubit-auxiliary coupling, rad/ns
    double omega_drive = 0.0;      // drive amplitude Omega_k(t), rad/ns
    double alpha = 0.0;            // anharmonicity, rad/ns
    double delta = 0.0;            // qubit-auxiliary detuning, rad/ns
};

// g~ = g Omega alpha / (sqrt(2) Delta (Delta - alpha)); exactly linear in
// each of g, Omega, alpha.  Throws DomainError when Delta = 0 or
// Delta = alpha.
double effective_two_qubit_coupling(const TransmonParams& p);

enum class Platform { Transmon1Q, Transmon2Q, Nv1Q, Nv2Q };

Platform platform_from_string(std::string_view name);
std::string_view platform_name(Platform p);

// Labels for the abstract levels (|0>, |e>, |1>), in that order.
struct LevelAssignment {
    Platform platform;
    std::array<std::string, 3> labels;
    std::string description;
};

LevelAssignment map_to_platform(const GateSpec& spec, Platform platform);

}  // namespace holopulse
