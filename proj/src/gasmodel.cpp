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

#include "workerrep/gasmodel.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "workerrep/ledger.hpp"
#include "workerrep/operations.hpp"

namespace workerrep {

std::string_view gas_kind_label(GasKind kind) noexcept {
    switch (kind) {
        case GasKind::kCreateWorker: return "Create worker";
        case GasKind::kCreateTaskPoster: return "Create taskposter";
        case GasKind::kPostTask: return "Post task with fees";
        case GasKind::kCreateAgreement: return "Create agreement";
        case GasKind::kAcceptAgreement: return "Accept agreement";
        case GasKind::kSubmitHash: return "Submit hash";
        case GasKind::kAssignEvaluators: return "Assign evaluators";
        case GasKind::kFirstEvaluationSubmit: return "First evaluation submit";
        case GasKind::kSecondEvaluationSubmit: return "Second evaluation submit";
        case GasKind::kThirdEvaluationSubmit: return "Third evaluation submit";
        case GasKind::kBecomeEvaluator: return "Become evaluator";
        case GasKind::kDeploy: return "Deploy";
        case GasKind::kApply: return "Apply for task";
        case GasKind::kReveal: return "Reveal submission";
        case GasKind::kCancelTask: return "Cancel task";
        case GasKind::kCancelAgreement: return "Cancel agreement";
        case GasKind::kTick: return "Advance time";
        case GasKind::kExit: return "Exit platform";
    }
    return "Unknown";
}

const std::vector<GasRow>& measured_gas_table() {
    static const std::vector<GasRow> rows = {
        {GasKind::kCreateWorker, 229'786, 0.0333},
        {GasKind::kCreateTaskPoster, 228'410, 0.0331},
        {GasKind::kPostTask, 250'502, 0.0363},
        {GasKind::kCreateAgreement, 198'134, 0.0287},
        {GasKind::kAcceptAgreement, 49'729, 0.0072},
        {GasKind::kSubmitHash, 114'068, 0.0165},
        {GasKind::kAssignEvaluators, 328'702, 0.0477},
        {GasKind::kFirstEvaluationSubmit, 133'073, 0.0193},
        {GasKind::kSecondEvaluationSubmit, 105'620, 0.0153},
        {GasKind::kThirdEvaluationSubmit, 274'360, 0.0398},
        {GasKind::kBecomeEvaluator, 47'878, 0.0069},
    };
    return rows;
}

GasSchedule::GasSchedule() {
    for (const auto& row : measured_gas_table()) table_[row.kind] = row.gas;
}

std::uint64_t GasSchedule::charge(GasKind kind) const {
    auto it = table_.find(kind);
    return it == table_.end() ? default_gas_ : it->second;
}

void GasSchedule::set(GasKind kind, std::uint64_t gas) {
    if (gas == 0) throw std::invalid_argument("gas values must be positive");
    table_[kind] = gas;
}

void GasSchedule::set_default(std::uint64_t gas) {
    if (gas == 0) throw std::invalid_argument("gas values must be positive");
    default_gas_ = gas;
}

double cost_usd(std::uint64_t gas, double gas_price_gwei, double ether_usd) {
    double raw = static_cast<double>(gas) * gas_price_gwei * 1e-9 * ether_usd;
    return std::round(raw * 1e4) / 1e4;
}

std::string format_usd(double usd) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", usd);
    return buf;
}

LifecycleTotal lifecycle_total(std::span<const LedgerEntry> trace) {
    LifecycleTotal total;
    std::map<OpKind, std::uint64_t> seen;
    for (const auto& e : trace) {
        OpKind kind = kind_of(decode_operation(e.payload));
        ++seen[kind];
        switch (kind) {
            case OpKind::kRegister:
            case OpKind::kPostTask:
            case OpKind::kCreateAgreement:
            case OpKind::kAcceptAgreement:
            case OpKind::kCommit:
            case OpKind::kAssignEvaluators:
            case OpKind::kSubmitEvaluation:
            case OpKind::kBecomeEvaluator: total.metered_gas += e.gas_charged; break;
            default: total.auxiliary_gas += e.gas_charged; break;
        }
    }
    auto need = [&](OpKind kind, std::uint64_t count) {
        if (seen[kind] < count) {
            fail(ErrorCode::kIncompleteTrace, "trace lacks " + std::string(op_kind_name(kind)));
        }
    };
    need(OpKind::kPostTask, 1);
    need(OpKind::kCreateAgreement, 1);
    need(OpKind::kAcceptAgreement, 1);
    need(OpKind::kCommit, 1);
    need(OpKind::kAssignEvaluators, 1);
    need(OpKind::kSubmitEvaluation, 3);
    need(OpKind::kBecomeEvaluator, 1);
    return total;
}

namespace {

std::string entry_label(const Operation& operation, std::uint64_t gas, const GasSchedule& schedule) {
    switch (kind_of(operation)) {
        case OpKind::kDeploy: return std::string(gas_kind_label(GasKind::kDeploy));
        case OpKind::kRegister:
            switch (std::get<op::Register>(operation).role) {
                case Role::kWorker: return std::string(gas_kind_label(GasKind::kCreateWorker));
                case Role::kTaskPoster: return std::string(gas_kind_label(GasKind::kCreateTaskPoster));
                case Role::kOperator: return "Create operator";
            }
            return "Unknown";
        case OpKind::kPostTask: return std::string(gas_kind_label(GasKind::kPostTask));
        case OpKind::kCreateAgreement: return std::string(gas_kind_label(GasKind::kCreateAgreement));
        case OpKind::kAcceptAgreement: return std::string(gas_kind_label(GasKind::kAcceptAgreement));
        case OpKind::kCommit: return std::string(gas_kind_label(GasKind::kSubmitHash));
        case OpKind::kAssignEvaluators: return std::string(gas_kind_label(GasKind::kAssignEvaluators));
        case OpKind::kBecomeEvaluator: return std::string(gas_kind_label(GasKind::kBecomeEvaluator));
        case OpKind::kSubmitEvaluation:
            for (GasKind k : {GasKind::kFirstEvaluationSubmit, GasKind::kSecondEvaluationSubmit,
                              GasKind::kThirdEvaluationSubmit}) {
                if (gas == schedule.charge(k)) return std::string(gas_kind_label(k));
            }
            return "Evaluation submit";
        case OpKind::kApply: return std::string(gas_kind_label(GasKind::kApply));
        case OpKind::kReveal: return std::string(gas_kind_label(GasKind::kReveal));
        case OpKind::kCancelTask: return std::string(gas_kind_label(GasKind::kCancelTask));
        case OpKind::kCancelAgreement: return std::string(gas_kind_label(GasKind::kCancelAgreement));
        case OpKind::kAdvanceTime: return std::string(gas_kind_label(GasKind::kTick));
        case OpKind::kExit: return std::string(gas_kind_label(GasKind::kExit));
        case OpKind::kReverted: return "Reverted call";
    }
    return "Unknown";
}

}  // namespace

std::vector<CostRow> cost_report(std::span<const LedgerEntry> trace, const GasSchedule& schedule) {
    std::map<std::string, CostRow> by_label;
    for (const auto& e : trace) {
        std::string label = entry_label(decode_operation(e.payload), e.gas_charged, schedule);
        CostRow& row = by_label[label];
        row.operation = label;
        ++row.count;
        row.gas += e.gas_charged;
    }
    std::vector<CostRow> rows;
    for (auto& [label, row] : by_label) {
        row.usd = cost_usd(row.gas, schedule.gas_price_gwei, schedule.ether_usd);
        rows.push_back(row);
    }
    return rows;
}

std::string cost_report_csv(const std::vector<CostRow>& rows) {
    std::ostringstream out;
    out << "operation,count,gas,usd\n";
    for (const auto& row : rows) {
        out << '"' << row.operation << "\"," << row.count << ',' << row.gas << ',' << format_usd(row.usd) << '\n';
    }
    return out.str();
}

}  // namespace workerrep
