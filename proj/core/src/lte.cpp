#include "cranplan/lte.hpp"

#include <cmath>

namespace cranplan {

std::string_view name(ModulationScheme scheme) noexcept {
    switch (scheme) {
        case ModulationScheme::kQpsk: return "QPSK";
        case ModulationScheme::kQam16: return "16-QAM";
        case ModulationScheme::kQam64: return "64-QAM";
    }
    return "?";
}

PowerDbm::PowerDbm(double dbm) : dbm_(dbm) {
    if (!std::isfinite(dbm))
        throw InvalidScenario("power in dBm must be finite");
}

Modulation modulation_of(McsIndex mcs) noexcept {
    const int m = mcs.value();
    if (m <= 9) return {ModulationScheme::kQpsk, 2};
    if (m <= 16) return {ModulationScheme::kQam16, 4};
    return {ModulationScheme::kQam64, 6};
}

// Both rates are computed as an exact integer numerator divided once by
// 1000 so that grid values like 16.8 and 100.8 come out as the nearest
// double of the decimal literal.
double symbol_rate_msym(PrbAllocation prb) noexcept {
    return static_cast<double>(prb.value() * 168) / 1000.0;
}

double max_dl_rate_mbps(PrbAllocation prb, McsIndex mcs) noexcept {
    const int bits = modulation_of(mcs).bits_per_symbol;
    return static_cast<double>(prb.value() * 168 * bits) / 1000.0;
}

PowerDbm max_ue_power(PowerDbm pdsch_epre, PrbAllocation n_prb) {
    if (n_prb.value() == 0)
        throw InvalidScenario("max_ue_power needs a nonzero PRB allocation");
    return PowerDbm(pdsch_epre.dbm() + 10.0 * std::log10(12.0 * n_prb.value()));
}

}  // namespace cranplan
