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

#include "workerrep/platform.hpp"

#include <algorithm>

#include <json.hpp>

#include "workerrep/keccak.hpp"
#include "workerrep/reputation.hpp"

namespace workerrep {

void PlatformState::encode(Writer& w) const {
    encode_params(w, params);
    w.boolean(deployed).i64(now).u64(entries_applied);
    accounts.encode(w);
    market.encode(w);
    agreements.encode(w);
    submissions.encode(w);
    evaluations.encode(w);
}

Hash256 PlatformState::state_root() const {
    Writer w;
    encode(w);
    return keccak256(w.data());
}

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

const UserAccount& require_sender(const PlatformState& s, const AccountId& sender) {
    const UserAccount* account = s.accounts.find(sender);
    if (account == nullptr) fail(ErrorCode::kUnknownSender, sender.hex());
    if (!account->active()) fail(ErrorCode::kAlreadyExited, sender.hex());
    return *account;
}

const UserAccount& require_worker(const PlatformState& s, const AccountId& id) {
    const UserAccount* account = s.accounts.find(id);
    if (account == nullptr || !account->is_worker()) fail(ErrorCode::kUnknownWorker, id.hex());
    if (!account->active()) fail(ErrorCode::kUnknownWorker, id.hex() + " has exited");
    return *account;
}

bool volunteer_qualifies(const PlatformState& s, const UserAccount& account) {
    if (s.params.volunteer_threshold == VolunteerThreshold::kNone) return true;
    return account.reputation >= s.accounts.stats().avg_worker_reputation;
}

ConsensusRule rule_of(const ProtocolParams& p) { return ConsensusRule{p.outlier_k, p.outlier_floor}; }

// Applies every credit of `worker` that now has a final score and y evaluations.
void resolve_credits(PlatformState& s, const AccountId& worker) {
    const std::uint32_t y = s.params.evaluations_owed;
    for (const auto& credit : s.evaluations.take_ready_credits(worker, y)) {
        Fixed delta = reputation::submission_rep_delta(*credit.final_score, credit.e_scores, y, s.params.alpha);
        s.accounts.update_reputation(worker, delta);
    }
}

void finalize(PlatformState& s, EvaluationRecord& rec, std::vector<AgreementEvent>& events) {
    EvaluationRound& round = rec.rounds.back();
    const ConsensusResult& result = *round.result;
    const Submission& sub = s.submissions.get(rec.submission_id);
    const Task& task = s.market.get(sub.task_id);
    const std::uint32_t y = s.params.evaluations_owed;

    // Weights use reputations as they stood before this submission's updates.
    std::vector<reputation::ScoredEvaluator> kept;
    for (const auto& e : round.scores) {
        if (result.in_consensus.contains(e.evaluator)) {
            kept.push_back({e.completeness, e.quality, s.accounts.get(e.evaluator).reputation});
        }
    }
    reputation::ConsensusScores cs = reputation::consensus_scores(kept);
    FinalOutcome outcome;
    outcome.completeness = cs.completeness;
    outcome.quality = cs.quality;
    outcome.unweighted_fallback = cs.unweighted_fallback;
    outcome.final_score =
        reputation::final_score(cs.completeness, cs.quality, task.weight_completeness, task.weight_quality);

    std::vector<AccountId> credited;
    for (const auto& e : round.scores) {
        EvaluatorOutcome eo;
        eo.evaluator = e.evaluator;
        eo.e_score = reputation::evaluator_score(cs.completeness, cs.quality, e.completeness, e.quality);
        eo.outlier = result.outliers.contains(e.evaluator);
        if (s.evaluations.has_unmet_quota(e.evaluator, y)) {
            eo.role = EvaluatorRole::kObligated;
            if (!eo.outlier) {
                eo.counted_toward_quota = s.evaluations.credit_evaluation(e.evaluator, eo.e_score, y);
                credited.push_back(e.evaluator);
            }
        } else {
            eo.role = EvaluatorRole::kVolunteer;
            eo.reputation_delta = reputation::volunteer_rep_delta(eo.e_score, eo.outlier, s.params.alpha);
            s.accounts.update_reputation(e.evaluator, eo.reputation_delta);
        }
        outcome.evaluators.push_back(eo);
    }

    events.push_back(s.agreements.settle(sub.agreement_id, outcome.final_score, cs.completeness, s.now));
    s.market.set_status(sub.task_id, TaskStatus::kEvaluated);

    s.evaluations.set_final_score(rec.worker, rec.submission_id, outcome.final_score);
    rec.outcome = std::move(outcome);
    resolve_credits(s, rec.worker);
    for (const auto& id : credited) resolve_credits(s, id);
}

void force_and_finalize(PlatformState& s, EvaluationRecord& rec, std::vector<AgreementEvent>& events) {
    EvaluationRound& round = rec.rounds.back();
    round.result = forced_consensus(rec.submission_id, round.number, round.scores);
    ++s.evaluations.forced_rounds;
    finalize(s, rec, events);
}

ApplyOutcome apply_assign(PlatformState& s, const AccountId& sender, const op::AssignEvaluators& o) {
    ApplyOutcome out{GasKind::kAssignEvaluators, {}};
    const Submission& sub = s.submissions.get(o.submission_id);
    if (sub.worker != sender) fail(ErrorCode::kWrongCaller, "only the submitting worker requests evaluators");
    const EvaluationRecord& existing = s.evaluations.get(o.submission_id);
    if (existing.finalized()) fail(ErrorCode::kMaxRoundsExceeded, "evaluation already finalized");
    std::uint32_t round = 1;
    if (!existing.rounds.empty()) {
        if (!existing.awaiting_reassignment()) fail(ErrorCode::kRoundInProgress);
        round = existing.rounds.back().number + 1;
        if (round > s.params.max_rounds) fail(ErrorCode::kMaxRoundsExceeded);
    }
    Hash256 seed = selection_seed(sub.commitment, s.state_root(), round);
    std::vector<Candidate> eligible = eligible_evaluators(s, o.submission_id);
    EvaluationRecord& rec = s.evaluations.mutable_get(o.submission_id);
    if (eligible.size() < s.params.evaluators_per_submission && round > 1) {
        // Nobody left to reassign to: settle on the last sheet as it stands.
        force_and_finalize(s, rec, out.events);
        return out;
    }
    EvaluatorPool pool = assign_evaluators(o.submission_id, std::move(eligible), s.params.evaluators_per_submission,
                                           seed, round, s.params.slot_selection);
    EvaluationRound r;
    r.number = round;
    r.seed = seed;
    r.eligible = std::move(pool.eligible);
    r.slots = std::move(pool.slots);
    r.selected = std::move(pool.selected);
    rec.rounds.push_back(std::move(r));
    s.submissions.start_round(o.submission_id, round);
    return out;
}

ApplyOutcome apply_score(PlatformState& s, const AccountId& sender, const op::SubmitEvaluation& o) {
    const Submission& sub = s.submissions.get(o.submission_id);
    EvaluationRecord& rec = s.evaluations.mutable_get(o.submission_id);
    if (rec.rounds.empty() || rec.finalized() || rec.rounds.back().result) fail(ErrorCode::kNotSelected, "no open round");
    EvaluationRound& round = rec.rounds.back();
    if (!round.is_selected(sender)) fail(ErrorCode::kNotSelected, sender.hex());
    if (round.has_scored(sender)) fail(ErrorCode::kDuplicateScore, sender.hex());
    if (o.completeness < reputation::kMinScore || o.completeness > reputation::kMaxScore ||
        o.quality < reputation::kMinScore || o.quality > reputation::kMaxScore) {
        fail(ErrorCode::kOutOfRange, "scores must lie in [1, 100]");
    }
    if (!sub.revealed) fail(ErrorCode::kNotRevealed);

    ApplyOutcome out;
    round.scores.push_back({sender, o.completeness, o.quality, o.review_ref});
    if (round.scores.size() == 1) {
        out.gas_kind = GasKind::kFirstEvaluationSubmit;
    } else if (!round.complete()) {
        out.gas_kind = GasKind::kSecondEvaluationSubmit;
    } else {
        out.gas_kind = GasKind::kThirdEvaluationSubmit;
    }
    if (!round.complete()) return out;

    ConsensusResult result = run_consensus(o.submission_id, round.number, round.scores, rule_of(s.params),
                                           round.selected.size());
    if (result.reached) {
        round.result = std::move(result);
        finalize(s, rec, out.events);
        return out;
    }
    ++s.evaluations.consensus_failures;
    if (round.number >= s.params.max_rounds) {
        force_and_finalize(s, rec, out.events);
        return out;
    }
    rec.excluded.insert(result.outliers.begin(), result.outliers.end());
    round.result = std::move(result);
    return out;
}

ApplyOutcome apply_exit(PlatformState& s, const AccountId& sender) {
    std::vector<std::string> blockers = open_obligations(s, sender);
    if (!blockers.empty()) fail(ErrorCode::kOpenObligations, blockers.front());
    // A leaving poster's unassigned tasks are withdrawn with them.
    for (const auto& task : s.market.all()) {
        if (task.poster == sender && task.status == TaskStatus::kOpen) s.market.cancel_task(sender, task.id);
    }
    Wei refund = s.accounts.exit(sender);
    s.evaluations.withdraw(sender);
    return {GasKind::kExit, {}, refund};
}

void mark_lapsed_tasks(PlatformState& s, const std::vector<AgreementEvent>& events) {
    for (const auto& e : events) {
        if (e.kind == AgreementEventKind::kCancelled || e.kind == AgreementEventKind::kDefaulted) {
            s.market.set_status(e.task_id, TaskStatus::kCancelled);
        }
    }
}

ApplyOutcome dispatch(PlatformState& s, const AccountId& sender, const Operation& operation) {
    if (!std::holds_alternative<op::Deploy>(operation) && !std::holds_alternative<op::Register>(operation)) {
        require_sender(s, sender);
    }
    return std::visit(
        Overloaded{
            [&](const op::Deploy& o) -> ApplyOutcome {
                if (s.entries_applied != 0 || s.deployed) fail(ErrorCode::kBadGenesis, "deployment must be entry 0");
                if (account_of(o.operator_key) != sender) fail(ErrorCode::kWrongCaller, "operator key mismatch");
                o.params.validate();
                s.params = o.params;
                s.accounts.register_operator(o.operator_key, s.now);
                s.deployed = true;
                return {GasKind::kDeploy, {}};
            },
            [&](const op::Register& o) -> ApplyOutcome {
                if (account_of(o.public_key) != sender) fail(ErrorCode::kWrongCaller, "registration key mismatch");
                s.accounts.register_account(o, s.params.registration_fee, s.now);
                return {o.role == Role::kWorker ? GasKind::kCreateWorker : GasKind::kCreateTaskPoster, {}};
            },
            [&](const op::Exit&) { return apply_exit(s, sender); },
            [&](const op::PostTask& o) -> ApplyOutcome {
                if (s.accounts.get(sender).role != Role::kTaskPoster) fail(ErrorCode::kNotATaskPoster);
                s.market.post_task(sender, o, s.now);
                return {GasKind::kPostTask, {}};
            },
            [&](const op::CancelTask& o) -> ApplyOutcome {
                s.market.cancel_task(sender, o.task_id);
                return {GasKind::kCancelTask, {}};
            },
            [&](const op::Apply& o) -> ApplyOutcome {
                require_worker(s, sender);
                s.market.apply(sender, o.task_id);
                return {GasKind::kApply, {}};
            },
            [&](const op::CreateAgreement& o) -> ApplyOutcome {
                if (s.accounts.get(sender).role != Role::kTaskPoster) fail(ErrorCode::kNotATaskPoster);
                require_worker(s, o.worker);
                const Task& task = s.market.get(o.task_id);
                auto [agreement, event] = s.agreements.create(sender, task, o, s.now);
                s.market.set_status(o.task_id, TaskStatus::kAgreed);
                return {GasKind::kCreateAgreement, {event}};
            },
            [&](const op::CancelAgreement& o) -> ApplyOutcome {
                AgreementEvent event = s.agreements.cancel_by_poster(sender, o.agreement_id, s.now);
                s.market.set_status(event.task_id, TaskStatus::kCancelled);
                return {GasKind::kCancelAgreement, {event}};
            },
            [&](const op::AcceptAgreement& o) -> ApplyOutcome {
                AgreementEvent event = s.agreements.accept(sender, o.agreement_id, o.deposit, s.now);
                return {GasKind::kAcceptAgreement, {event}};
            },
            [&](const op::AdvanceTime& o) -> ApplyOutcome {
                if (o.now < s.now) fail(ErrorCode::kTimeReversal);
                s.now = o.now;
                std::vector<AgreementEvent> fired = s.agreements.tick(s.now);
                mark_lapsed_tasks(s, fired);
                return {GasKind::kTick, std::move(fired)};
            },
            [&](const op::Commit& o) -> ApplyOutcome {
                s.agreements.check_commit(sender, o.agreement_id, s.now);
                const Agreement& a = s.agreements.get(o.agreement_id);
                const Submission& sub = s.submissions.commit(sender, a.id, a.task_id, o.commitment, s.now);
                s.agreements.mark_committed(a.id);
                s.market.set_status(a.task_id, TaskStatus::kSubmitted);
                s.evaluations.open_record(sub.id, sender, {sender, a.poster});
                s.evaluations.add_obligation(sender, sub.id);
                return {GasKind::kSubmitHash, {}};
            },
            [&](const op::AssignEvaluators& o) { return apply_assign(s, sender, o); },
            [&](const op::Reveal& o) -> ApplyOutcome {
                const EvaluationRecord& rec = s.evaluations.get(o.submission_id);
                if (rec.rounds.empty()) fail(ErrorCode::kNotAssigned, "no evaluators assigned yet");
                if (rec.finalized()) fail(ErrorCode::kBadReveal, "evaluation already finalized");
                s.submissions.record_reveal(o.submission_id, sender, o.envelopes, rec.rounds.back().selected);
                return {GasKind::kReveal, {}};
            },
            [&](const op::BecomeEvaluator&) -> ApplyOutcome {
                const UserAccount& account = s.accounts.get(sender);
                if (!account.is_worker()) fail(ErrorCode::kNotAWorker);
                if (s.evaluations.enrolled(sender)) fail(ErrorCode::kAlreadyEnrolled);
                bool obligated = s.evaluations.has_unmet_quota(sender, s.params.evaluations_owed);
                if (!obligated && !volunteer_qualifies(s, account)) {
                    fail(ErrorCode::kBelowThreshold, "reputation below the platform average");
                }
                s.evaluations.enroll(sender);
                return {GasKind::kBecomeEvaluator, {}};
            },
            [&](const op::SubmitEvaluation& o) { return apply_score(s, sender, o); },
            [&](const op::Reverted&) -> ApplyOutcome {
                // Only ever produced by the writer itself; a client cannot send one.
                fail(ErrorCode::kWrongCaller, "reverted entries are not submittable");
            },
        },
        operation);
}

}  // namespace

ApplyOutcome apply_operation(PlatformState& state, const AccountId& sender, const Operation& operation) {
    PlatformState next = state;
    ApplyOutcome outcome = dispatch(next, sender, operation);
    ++next.entries_applied;
    state = std::move(next);
    return outcome;
}

std::vector<Candidate> eligible_evaluators(const PlatformState& s, SubmissionId submission) {
    const Submission& sub = s.submissions.get(submission);
    const Task& task = s.market.get(sub.task_id);
    const EvaluationRecord& rec = s.evaluations.get(submission);
    const std::uint32_t y = s.params.evaluations_owed;
    std::vector<Candidate> out;
    for (const auto& [id, account] : s.accounts.all()) {
        if (!account.is_worker() || !account.active()) continue;
        if (rec.excluded.contains(id)) continue;
        if (!std::includes(account.skills.begin(), account.skills.end(), task.skills_required.begin(),
                           task.skills_required.end())) {
            continue;
        }
        bool obligated = s.evaluations.has_unmet_quota(id, y);
        bool volunteer = s.evaluations.enrolled(id) && volunteer_qualifies(s, account);
        if (obligated || volunteer) out.push_back({id, account.reputation});
    }
    return out;
}

std::vector<std::string> open_obligations(const PlatformState& s, const AccountId& id) {
    std::vector<std::string> out;
    for (const auto& a : s.agreements.all()) {
        if (a.open() && (a.worker == id || a.poster == id)) {
            out.push_back("agreement " + std::to_string(a.id) + " is still " +
                          std::string(agreement_state_name(a.state)));
        }
    }
    for (const auto& [sub_id, rec] : s.evaluations.records()) {
        if (rec.finalized()) continue;
        if (rec.worker == id) out.push_back("submission " + std::to_string(sub_id) + " awaits evaluation");
        const EvaluationRound* round = rec.current();
        if (round != nullptr && !round->result && round->is_selected(id)) {
            out.push_back("selected to evaluate submission " + std::to_string(sub_id));
        }
    }
    return out;
}

void fold_entry(PlatformState& state, const LedgerEntry& entry) {
    auto reject = [&](const std::string& why) -> void {
        fail(ErrorCode::kInvalidChain, "entry " + std::to_string(entry.index) + ": " + why);
    };
    if (entry.index != state.entries_applied) reject("out of sequence");
    Operation operation;
    try {
        operation = decode_operation(entry.payload);
    } catch (const ProtocolError& e) {
        reject(e.what());
    }
    try {
        if (std::holds_alternative<op::Reverted>(operation)) {
            require_sender(state, entry.sender);
            ++state.entries_applied;
            return;
        }
        apply_operation(state, entry.sender, operation);
    } catch (const ProtocolError& e) {
        reject(e.what());
    }
}

ChainState replay(std::span<const LedgerEntry> entries) {
    VerificationReport report = verify_chain(entries);
    if (!report.ok) fail(ErrorCode::kInvalidChain, report.describe());
    ChainState out;
    for (const auto& entry : entries) fold_entry(out.state, entry);
    out.state_root = out.state.state_root();
    return out;
}

Platform::Platform(GasSchedule schedule, const SignatureScheme& scheme, const EnvelopeCipher& cipher)
    : schedule_(std::move(schedule)), scheme_(&scheme), cipher_(&cipher) {}

Receipt Platform::submit(const KeyPair& signer, const Operation& operation) {
    const AccountId sender = signer.account();
    Receipt receipt;
    try {
        ApplyOutcome outcome = apply_operation(state_, sender, operation);
        receipt.gas_kind = outcome.gas_kind;
        receipt.events = std::move(outcome.events);
        receipt.refunded = outcome.refunded;
    } catch (const ProtocolError& e) {
        if (e.code() != ErrorCode::kWrongCaller || !std::holds_alternative<op::AcceptAgreement>(operation)) throw;
        // The rejected acceptance still burns gas; the deposit goes back.
        op::Reverted reverted{static_cast<std::uint8_t>(OpKind::kAcceptAgreement), e.code()};
        receipt.gas_kind = GasKind::kAcceptAgreement;
        receipt.gas = schedule_.charge(receipt.gas_kind);
        receipt.index = ledger_.append(encode_operation(reverted), signer, receipt.gas, *scheme_).index;
        ++state_.entries_applied;
        throw;
    }
    receipt.gas = schedule_.charge(receipt.gas_kind);
    receipt.index = ledger_.append(encode_operation(operation), signer, receipt.gas, *scheme_).index;
    events_.insert(events_.end(), receipt.events.begin(), receipt.events.end());
    return receipt;
}

Receipt Platform::reveal(const KeyPair& worker, SubmissionId submission, ByteView plaintext) {
    const Submission& sub = state_.submissions.get(submission);
    const EvaluationRecord& rec = state_.evaluations.get(submission);
    if (rec.rounds.empty()) fail(ErrorCode::kNotAssigned, "no evaluators assigned yet");
    std::vector<PublicKey> keys;
    for (const auto& id : rec.rounds.back().selected) keys.push_back(state_.accounts.get(id).public_key);
    op::Reveal reveal{submission, seal_envelopes(store_, sub, worker, plaintext, keys, *cipher_)};
    return submit(worker, reveal);
}

Bytes Platform::fetch_for_evaluator(const KeyPair& evaluator, SubmissionId submission) const {
    const Submission& sub = state_.submissions.get(submission);
    const EvaluationRecord& rec = state_.evaluations.get(submission);
    const EvaluationRound* round = rec.current();
    if (round == nullptr || !round->is_selected(evaluator.account())) {
        fail(ErrorCode::kNotAssigned, evaluator.account().hex());
    }
    if (!sub.revealed) fail(ErrorCode::kNotRevealed);
    return open_envelope(store_, sub, evaluator, state_.accounts.get(sub.worker).public_key, *cipher_);
}

std::string store_manifest_json(const PlatformState& state) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& sub : state.submissions.all()) {
        if (sub.encrypted_refs.empty()) continue;
        nlohmann::ordered_json refs = nlohmann::ordered_json::object();
        for (const auto& [who, address] : sub.encrypted_refs) refs[who.hex()] = address.hex();
        j[std::to_string(sub.id)] = {{"commitment", sub.commitment.hex()}, {"round", sub.round}, {"envelopes", refs}};
    }
    return j.dump(2);
}

}  // namespace workerrep
