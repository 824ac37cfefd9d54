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

#include "workerrep/agreement.hpp"

#include "workerrep/reputation.hpp"

namespace workerrep {

std::string_view agreement_state_name(AgreementState state) noexcept {
    switch (state) {
        case AgreementState::kCreated: return "created";
        case AgreementState::kAccepted: return "accepted";
        case AgreementState::kCancelled: return "cancelled";
        case AgreementState::kDefaulted: return "defaulted";
        case AgreementState::kSettled: return "settled";
    }
    return "unknown";
}

std::string_view agreement_event_name(AgreementEventKind kind) noexcept {
    switch (kind) {
        case AgreementEventKind::kCreated: return "created";
        case AgreementEventKind::kAccepted: return "accepted";
        case AgreementEventKind::kCancelled: return "cancelled";
        case AgreementEventKind::kDefaulted: return "defaulted";
        case AgreementEventKind::kSettled: return "settled";
    }
    return "unknown";
}

std::pair<const Agreement*, AgreementEvent> AgreementBook::create(const AccountId& poster, const Task& task,
                                                                  const op::CreateAgreement& request, Tick now) {
    if (task.poster != poster) fail(ErrorCode::kNotTaskOwner);
    if (task.status != TaskStatus::kOpen) fail(ErrorCode::kTaskNotOpen, "task " + std::to_string(task.id));
    if (!task.applicants.contains(request.worker)) fail(ErrorCode::kNotAnApplicant, request.worker.hex());
    if (request.escrow != task.reward) {
        fail(ErrorCode::kWrongEscrowAmount,
             "sent " + std::to_string(request.escrow) + ", reward is " + std::to_string(task.reward));
    }
    if (request.acceptance_fee < 0) fail(ErrorCode::kWrongDeposit, "negative acceptance fee");
    if (request.acceptance_deadline >= request.due_date || request.acceptance_deadline < now) {
        fail(ErrorCode::kBadDeadlines);
    }
    for (const auto& a : agreements_) {
        if (a.task_id == task.id && a.open()) fail(ErrorCode::kTaskNotOpen, "task already has an active agreement");
    }
    Wei in = checked_add(paid_in_, request.escrow);

    Agreement a;
    a.id = agreements_.size();
    a.task_id = task.id;
    a.poster = poster;
    a.worker = request.worker;
    a.escrow = request.escrow;
    a.acceptance_fee = request.acceptance_fee;
    a.acceptance_deadline = request.acceptance_deadline;
    a.due_date = request.due_date;
    paid_in_ = in;
    agreements_.push_back(a);
    return {&agreements_.back(), AgreementEvent{AgreementEventKind::kCreated, a.id, a.task_id, now, 0, 0}};
}

AgreementEvent AgreementBook::accept(const AccountId& caller, AgreementId id, Wei deposit, Tick now) {
    Agreement& a = mutable_get(id);
    // Lapsed offers report Expired whether or not the deadline tick has fired yet.
    if (a.state == AgreementState::kCancelled && now > a.acceptance_deadline) fail(ErrorCode::kExpired);
    if (a.state != AgreementState::kCreated) fail(ErrorCode::kNotCancellable, "agreement is not awaiting acceptance");
    if (caller != a.worker) fail(ErrorCode::kWrongCaller, "agreement names " + a.worker.hex());
    if (now > a.acceptance_deadline) fail(ErrorCode::kExpired);
    if (deposit != a.acceptance_fee) fail(ErrorCode::kWrongDeposit);
    paid_in_ = checked_add(paid_in_, deposit);
    a.worker_deposit = deposit;
    a.state = AgreementState::kAccepted;
    return {AgreementEventKind::kAccepted, a.id, a.task_id, now, 0, 0};
}

AgreementEvent AgreementBook::cancel_by_poster(const AccountId& caller, AgreementId id, Tick now) {
    Agreement& a = mutable_get(id);
    if (caller != a.poster) fail(ErrorCode::kWrongCaller);
    if (a.state != AgreementState::kCreated) fail(ErrorCode::kNotCancellable);
    return pay_out(a, AgreementEventKind::kCancelled, AgreementState::kCancelled, 0, a.escrow, now);
}

std::vector<AgreementEvent> AgreementBook::tick(Tick now) {
    std::vector<AgreementEvent> fired;
    for (auto& a : agreements_) {
        if (a.state == AgreementState::kCreated && now > a.acceptance_deadline) {
            fired.push_back(pay_out(a, AgreementEventKind::kCancelled, AgreementState::kCancelled, 0, a.escrow, now));
        } else if (a.state == AgreementState::kAccepted && !a.committed && now > a.due_date) {
            fired.push_back(pay_out(a, AgreementEventKind::kDefaulted, AgreementState::kDefaulted, 0,
                                    checked_add(a.escrow, a.worker_deposit), now));
        }
    }
    return fired;
}

AgreementEvent AgreementBook::settle(AgreementId id, Fixed final_score, Fixed completeness, Tick now) {
    Agreement& a = mutable_get(id);
    if (a.state != AgreementState::kAccepted) fail(ErrorCode::kNotAccepted);
    if (!a.committed) fail(ErrorCode::kNotEvaluated);
    Settlement s;
    s.reward_paid = reputation::reward_amount(final_score, a.escrow);
    s.fee_returned = reputation::fee_returned(completeness, a.worker_deposit);
    s.poster_remainder = a.escrow + a.worker_deposit - s.reward_paid - s.fee_returned;
    a.settlement = s;
    return pay_out(a, AgreementEventKind::kSettled, AgreementState::kSettled, s.reward_paid + s.fee_returned,
                   s.poster_remainder, now);
}

void AgreementBook::check_commit(const AccountId& caller, AgreementId id, Tick now) const {
    const Agreement& a = get(id);
    if (a.state != AgreementState::kAccepted) fail(ErrorCode::kNotAccepted);
    if (caller != a.worker) fail(ErrorCode::kWrongCaller);
    if (a.committed) fail(ErrorCode::kAlreadyCommitted);
    if (now > a.due_date) fail(ErrorCode::kPastDue);
}

void AgreementBook::mark_committed(AgreementId id) { mutable_get(id).committed = true; }

AgreementEvent AgreementBook::pay_out(Agreement& a, AgreementEventKind kind, AgreementState next, Wei to_worker,
                                      Wei to_poster, Tick now) {
    paid_out_ = checked_add(paid_out_, checked_add(to_worker, to_poster));
    a.state = next;
    return {kind, a.id, a.task_id, now, to_worker, to_poster};
}

const Agreement* AgreementBook::find(AgreementId id) const {
    return id < agreements_.size() ? &agreements_[id] : nullptr;
}

const Agreement& AgreementBook::get(AgreementId id) const {
    const Agreement* a = find(id);
    if (a == nullptr) fail(ErrorCode::kUnknownAgreement, std::to_string(id));
    return *a;
}

Agreement& AgreementBook::mutable_get(AgreementId id) {
    if (id >= agreements_.size()) fail(ErrorCode::kUnknownAgreement, std::to_string(id));
    return agreements_[id];
}

Wei AgreementBook::held() const {
    Wei total = 0;
    for (const auto& a : agreements_) {
        if (a.open()) total = checked_add(total, checked_add(a.escrow, a.worker_deposit));
    }
    return total;
}

void AgreementBook::encode(Writer& w) const {
    w.u64(agreements_.size());
    for (const auto& a : agreements_) {
        w.u64(a.id).u64(a.task_id).account(a.poster).account(a.worker).i64(a.escrow).i64(a.acceptance_fee);
        w.i64(a.acceptance_deadline).i64(a.due_date).u8(static_cast<std::uint8_t>(a.state)).i64(a.worker_deposit);
        w.boolean(a.committed).boolean(a.settlement.has_value());
        if (a.settlement) w.i64(a.settlement->reward_paid).i64(a.settlement->fee_returned).i64(a.settlement->poster_remainder);
    }
    w.i64(paid_in_).i64(paid_out_);
}

}  // namespace workerrep
