#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "workerrep/gasmodel.hpp"

namespace workerrep::testing {

struct PrintedGas {
    const char* label;
    std::uint64_t gas;
    double usd;
};

// Measured costs as printed, at 1 Gwei and $144.30 per ether.
inline const std::vector<PrintedGas>& printed_gas() {
    static const std::vector<PrintedGas> rows{
        {"Create worker", 229'786, 0.0333},
        {"Create taskposter", 228'410, 0.0331},
        {"Post task with fees", 250'502, 0.0363},
        {"Create agreement", 198'134, 0.0287},
        {"Accept agreement", 49'729, 0.0072},
        {"Submit hash", 114'068, 0.0165},
        {"Assign evaluators", 328'702, 0.0477},
        {"First evaluation submit", 133'073, 0.0193},
        {"Second evaluation submit", 105'620, 0.0153},
        {"Third evaluation submit", 274'360, 0.0398},
        {"Become evaluator", 47'878, 0.0069},
    };
    return rows;
}

inline constexpr std::uint64_t kPrintedLifecycleGas = 1'502'066;
inline constexpr double kPrintedLifecycleUsd = 0.2178;

// Gas column identical, USD within 1%, lifecycle sum exact.
inline bool gas_table_reproduced(std::string& detail) {
    const auto& table = measured_gas_table();
    const auto& printed = printed_gas();
    if (table.size() != printed.size()) {
        detail = "row count " + std::to_string(table.size());
        return false;
    }
    std::uint64_t lifecycle = 0;
    double worst = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (std::string(gas_kind_label(table[i].kind)) != printed[i].label || table[i].gas != printed[i].gas) {
            detail = std::string("row ") + printed[i].label;
            return false;
        }
        double usd = cost_usd(table[i].gas, 1.0, 144.30);
        worst = std::max(worst, std::abs(usd - printed[i].usd) / printed[i].usd);
        if (table[i].kind != GasKind::kCreateWorker && table[i].kind != GasKind::kCreateTaskPoster) {
            lifecycle += table[i].gas;
        }
    }
    double total_usd = cost_usd(lifecycle, 1.0, 144.30);
    worst = std::max(worst, std::abs(total_usd - kPrintedLifecycleUsd) / kPrintedLifecycleUsd);
    detail = "lifecycle " + std::to_string(lifecycle) + ", worst usd gap " + std::to_string(worst * 100) + "%";
    return lifecycle == kPrintedLifecycleGas && worst < 0.01;
}

}  // namespace workerrep::testing
