#include <cmath>

#include "hdqfc/errors.hpp"
#include "hdqfc/sfg.hpp"

namespace hdqfc::sfg {

ModeBeamSplitter mode_beam_splitter(double xi, double tau) {
    const double theta = xi * tau;
    const double c = std::cos(theta), s = std::sin(theta);
    return {{{{c, -s}, {s, c}}}, c * c, s * s};
}

double ModeCoupling::theta(int charge) const {
    auto it = xi.find(charge);
    if (it == xi.end()) throw ValidationError("no coupling calibrated for L = " + std::to_string(charge));
    return it->second * tau;
}

ModeCoupling calibrate_xi(const std::map<int, double>& eta_q, double tau) {
    if (!(tau > 0.0)) throw ValidationError("interaction time must be positive");
    ModeCoupling mc;
    mc.tau = tau;
    for (const auto& [l, eta] : eta_q) {
        if (eta < 0.0 || eta > 1.0)
            throw ValidationError("quantum efficiency for L = " + std::to_string(l) + " outside [0, 1]");
        mc.xi[l] = std::asin(std::sqrt(eta)) / tau;
    }
    return mc;
}

}  // namespace hdqfc::sfg
