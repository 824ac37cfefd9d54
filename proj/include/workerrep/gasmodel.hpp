/*
   Copyright 2026 The WorkerRep Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace workerrep {

struct LedgerEntry;

// Metered operation kinds. The first eleven are the measured contract calls;
// the rest are artifact-level operations that fall back to the default charge.
enum class GasKind : std::uint8_t {
    kCreateWorker,
    kCreateTaskPoster,
    kPostTask,
    kCreateAgreement,
    kAcceptAgreement,
    kSubmitHash,
    kAssignEvaluators,
    kFirstEvaluationSubmit,
    kSecondEvaluationSubmit,
    kThirdEvaluationSubmit,
    kBecomeEvaluator,
    kDeploy,
    kApply,
    kReveal,
    kCancelTask,
    kCancelAgreement,
    kTick,
    kExit,
};

inline constexpr std::size_t kMeasuredGasKinds = 11;

std::string_view gas_kind_label(GasKind kind) noexcept;

struct GasRow {
    GasKind kind;
    std::uint64_t gas;
    // Printed USD estimate at 1 Gwei and $144.30/ether, as measured.
    double reference_usd;
};

// Measured per-call gas at 1 Gwei, Dec 2019 prices.
const std::vector<GasRow>& measured_gas_table();

inline constexpr std::uint64_t kDefaultGas = 21'000;
inline constexpr std::uint64_t kReferenceLifecycleGas = 1'502'066;
inline constexpr double kReferenceLifecycleUsd = 0.2178;

class GasSchedule {
  public:
    GasSchedule();

    // Unknown or unmeasured kinds charge default_gas().
    [[nodiscard]] std::uint64_t charge(GasKind kind) const;
    void set(GasKind kind, std::uint64_t gas);
    void set_default(std::uint64_t gas);
    [[nodiscard]] std::uint64_t default_gas() const noexcept { return default_gas_; }

    double gas_price_gwei{1.0};
    double ether_usd{144.30};

  private:
    std::map<GasKind, std::uint64_t> table_;
    std::uint64_t default_gas_{kDefaultGas};
};

// gas * gwei * 1e-9 * usd, rounded to 4 decimal places.
double cost_usd(std::uint64_t gas, double gas_price_gwei, double ether_usd);
std::string format_usd(double usd);

struct LifecycleTotal {
    std::uint64_t metered_gas{0};    // entries whose kind is a measured contract call
    std::uint64_t auxiliary_gas{0};  // apply / reveal / tick and other artifact-level entries
};

// Sums gas over a task's trace. Throws IncompleteTrace unless the trace holds a
// task post, agreement creation, acceptance, hash submission, evaluator
// assignment, three evaluation submits and an evaluator enrollment.
LifecycleTotal lifecycle_total(std::span<const LedgerEntry> trace);

struct CostRow {
    std::string operation;
    std::uint64_t count{0};
    std::uint64_t gas{0};
    double usd{0.0};
};

// Per-operation totals over a trace, grouped by gas kind label.
std::vector<CostRow> cost_report(std::span<const LedgerEntry> trace, const GasSchedule& schedule);
std::string cost_report_csv(const std::vector<CostRow>& rows);

}  // namespace workerrep
