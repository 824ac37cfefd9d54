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

#include <optional>
#include <string>
#include <vector>

#include "workerrep/codec.hpp"
#include "workerrep/common.hpp"
#include "workerrep/fixed.hpp"
#include "workerrep/marketplace.hpp"
#include "workerrep/operations.hpp"

namespace workerrep {

enum class AgreementState : std::uint8_t { kCreated = 0, kAccepted, kCancelled, kDefaulted, kSettled };

std::string_view agreement_state_name(AgreementState state) noexcept;

struct Settlement {
    Wei reward_paid{0};
    Wei fee_returned{0};
    Wei poster_remainder{0};
};

struct Agreement {
    AgreementId id{0};
    TaskId task_id{0};
    AccountId poster;
    AccountId worker;
    Wei escrow{0};
    Wei acceptance_fee{0};
    Tick acceptance_deadline{0};
    Tick due_date{0};
    AgreementState state{AgreementState::kCreated};
    Wei worker_deposit{0};
    bool committed{false};
    std::optional<Settlement> settlement;

    [[nodiscard]] bool open() const noexcept {
        return state == AgreementState::kCreated || state == AgreementState::kAccepted;
    }
};

enum class AgreementEventKind : std::uint8_t { kCreated, kAccepted, kCancelled, kDefaulted, kSettled };

std::string_view agreement_event_name(AgreementEventKind kind) noexcept;

struct AgreementEvent {
    AgreementEventKind kind{AgreementEventKind::kCreated};
    AgreementId agreement_id{0};
    TaskId task_id{0};
    Tick at{0};
    Wei to_worker{0};
    Wei to_poster{0};
};

class AgreementBook {
  public:
    // Throws WrongEscrowAmount, NotAnApplicant, BadDeadlines, TaskNotOpen, NotTaskOwner.
    std::pair<const Agreement*, AgreementEvent> create(const AccountId& poster, const Task& task,
                                                       const op::CreateAgreement& request, Tick now);
    // Throws WrongCaller, Expired, WrongDeposit, NotCancellable.
    AgreementEvent accept(const AccountId& caller, AgreementId id, Wei deposit, Tick now);
    // Poster withdraws before acceptance; escrow goes back in full.
    AgreementEvent cancel_by_poster(const AccountId& caller, AgreementId id, Tick now);
    // Fires deadline transitions due at `now`; idempotent at a fixed time.
    std::vector<AgreementEvent> tick(Tick now);
    // Throws NotAccepted, NotEvaluated (no commitment yet).
    AgreementEvent settle(AgreementId id, Fixed final_score, Fixed completeness, Tick now);

    // Commitment recorded. Throws NotAccepted, WrongCaller, PastDue, AlreadyCommitted.
    void check_commit(const AccountId& caller, AgreementId id, Tick now) const;
    void mark_committed(AgreementId id);

    [[nodiscard]] const Agreement& get(AgreementId id) const;
    [[nodiscard]] const Agreement* find(AgreementId id) const;
    [[nodiscard]] const std::vector<Agreement>& all() const noexcept { return agreements_; }

    // Currency currently escrowed (reward plus any worker deposit) in open agreements.
    [[nodiscard]] Wei held() const;
    [[nodiscard]] Wei paid_in() const noexcept { return paid_in_; }
    [[nodiscard]] Wei paid_out() const noexcept { return paid_out_; }

    void encode(Writer& w) const;

  private:
    Agreement& mutable_get(AgreementId id);
    AgreementEvent pay_out(Agreement& a, AgreementEventKind kind, AgreementState next, Wei to_worker, Wei to_poster,
                           Tick now);

    std::vector<Agreement> agreements_;
    Wei paid_in_{0};
    Wei paid_out_{0};
};

}  // namespace workerrep
