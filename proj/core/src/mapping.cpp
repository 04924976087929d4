#include "holopulse/mapping.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace holopulse {

double effective_two_qubit_coupling(const TransmonParams& p) {
    if (p.delta == 0.0)
        throw DomainError("effective_two_qubit_coupling: detuning is zero");
    if (p.delta == p.alpha)
        throw DomainError(
            "effective_two_qubit_coupling: detuning equals anharmonicity");
    return p.g * p.omega_drive * p.alpha /
           (std::numbers::sqrt2 * p.delta * (p.delta - p.alpha));
}

Platform platform_from_string(std::string_view name) {
    if (name == "transmon-1q") return Platform::Transmon1Q;
    if (name == "transmon-2q") return Platform::Transmon2Q;
    if (name == "nv-1q") return Platform::Nv1Q;
    if (name == "nv-2q") return Platform::Nv2Q;
    throw UsageError("unknown platform '" + std::string(name) +
                     "' (expected transmon-1q|transmon-2q|nv-1q|nv-2q)");
}

std::string_view platform_name(Platform p) {
    switch (p) {
        case Platform::Transmon1Q: return "transmon-1q";
        case Platform::Transmon2Q: return "transmon-2q";
        case Platform::Nv1Q: return "nv-1q";
        case Platform::Nv2Q: return "nv-2q";
    }
    throw DomainError("platform_name: invalid platform");
}

LevelAssignment map_to_platform(const GateSpec& spec, Platform platform) {
    LevelAssignment out;
    out.platform = platform;
    std::ostringstream desc;
    switch (platform) {
        case Platform::Transmon1Q:
            // Three lowest transmon levels; qubit states |g>, |f> with |e>
            // auxiliary between them.
            out.labels = {"|g>", "|e>", "|f>"};
            desc << "single transmon, sequential two-tone drive";
            break;
        case Platform::Transmon2Q:
            // Single-excitation subspace of two transmons dispersively
            // coupled to an auxiliary transmon.
            out.labels = {"|fgg>", "|geg>", "|ggf>"};
            desc << "two transmons + auxiliary, effective couplings g~_k";
            break;
        case Platform::Nv1Q:
            // Ground-state spin triplet; Zeeman components under a bias
            // field, |m=0> as the ancilla.
            out.labels = {"|m=-1>", "|m=0>", "|m=+1>"};
            desc << "NV centre electron spin, two microwave tones";
            break;
        case Platform::Nv2Q:
            // Electron-spin levels conditioned on a nuclear spin-up state.
            out.labels = {"|0,up>", "|a,up>", "|1,up>"};
            desc << "NV electron-nuclear pair, state-selective drive";
            break;
    }
    desc << "; R[theta=" << spec.theta << ", phi=" << spec.phi << "]";
    out.description = desc.str();
    return out;
}

}  // namespace holopulse
