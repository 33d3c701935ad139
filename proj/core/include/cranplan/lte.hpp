#pragma once

#include <array>
#include <compare>
#include <string_view>

#include "cranplan/errors.hpp"

namespace cranplan {

/// Modulation and Coding Scheme index, 0..27.
class McsIndex {
public:
    static constexpr int kMin = 0;
    static constexpr int kMax = 27;

    explicit McsIndex(int value) : value_(value) {
        if (value < kMin || value > kMax)
            throw InvalidScenario("MCS index must be in [0, 27], got " +
                                  std::to_string(value));
    }

    int value() const noexcept { return value_; }
    auto operator<=>(const McsIndex&) const = default;

private:
    int value_;
};

/// PRB allocation. Strict mode admits the three deployed bandwidths
/// (25/50/100 PRB for 5/10/20 MHz). Extended mode admits any count in
/// [0, 100] for what-if sweeps and is flagged so strict consumers can
/// tell the two apart.
class PrbAllocation {
public:
    static constexpr std::array<int, 3> kStrictValues{25, 50, 100};

    explicit PrbAllocation(int value) : value_(value), extended_(false) {
        if (value != 25 && value != 50 && value != 100)
            throw InvalidScenario("PRB must be one of {25, 50, 100} in strict mode, got " +
                                  std::to_string(value) + " (use extended mode for other counts)");
    }

    static PrbAllocation extended(int value) {
        if (value < 0 || value > 100)
            throw InvalidScenario("extended-mode PRB must be in [0, 100], got " +
                                  std::to_string(value));
        PrbAllocation prb;
        prb.value_ = value;
        prb.extended_ = true;
        return prb;
    }

    int value() const noexcept { return value_; }
    bool is_extended() const noexcept { return extended_; }
    auto operator<=>(const PrbAllocation&) const = default;

private:
    PrbAllocation() : value_(0), extended_(true) {}

    int value_;
    bool extended_;
};

enum class ModulationScheme { kQpsk, kQam16, kQam64 };

std::string_view name(ModulationScheme scheme) noexcept;

struct Modulation {
    ModulationScheme scheme;
    int bits_per_symbol;  // 2, 4, or 6
};

/// A power level in dBm. Must be finite; calibration values vary per
/// hardware so there is no range restriction.
class PowerDbm {
public:
    explicit PowerDbm(double dbm);
    double dbm() const noexcept { return dbm_; }

private:
    double dbm_;
};

/// Downlink modulation for an MCS index: 0-9 QPSK, 10-16 16-QAM,
/// 17-27 64-QAM.
Modulation modulation_of(McsIndex mcs) noexcept;

/// PHY symbol rate in Msym/s: 168 symbols per ms per PRB with normal
/// cyclic prefix (12 subcarriers x 7 symbols x 2 slots).
double symbol_rate_msym(PrbAllocation prb) noexcept;

/// Maximum downlink data rate in Mbps: symbol rate times bits per
/// symbol of the MCS's modulation. This is the throughput phi fed to
/// the CPU utilization line.
double max_dl_rate_mbps(PrbAllocation prb, McsIndex mcs) noexcept;

/// UE transmit-power calibration over the usable bandwidth:
/// PDSCH_EPRE + 10*log10(12 * N_PRB). Requires a nonzero PRB count.
PowerDbm max_ue_power(PowerDbm pdsch_epre, PrbAllocation n_prb);

}  // namespace cranplan
