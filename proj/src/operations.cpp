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

#include "workerrep/operations.hpp"

#include <algorithm>
#include <type_traits>

#include "workerrep/codec.hpp"

namespace workerrep {

std::string_view role_name(Role role) noexcept {
    switch (role) {
        case Role::kWorker: return "worker";
        case Role::kTaskPoster: return "task_poster";
        case Role::kOperator: return "operator";
    }
    return "unknown";
}

void ProtocolParams::validate() const {
    auto bad = [](const std::string& what) { fail(ErrorCode::kConfigInvalid, what); };
    if (registration_fee < 0) bad("registration_fee must be non-negative");
    if (evaluators_per_submission < 1) bad("evaluators_per_submission must be >= 1");
    if (evaluations_owed < 1) bad("evaluations_owed must be >= 1");
    if (outlier_k && *outlier_k < Fixed{}) bad("outlier_k must be non-negative");
    if (outlier_floor < Fixed{}) bad("outlier_floor must be non-negative");
    if (alpha < Fixed{} || alpha > Fixed::from_int(1)) bad("alpha must lie in [0,1]");
    if (max_rounds < 1) bad("max_rounds must be >= 1");
}

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

std::vector<std::string> canonical_skills(std::vector<std::string> skills) {
    std::sort(skills.begin(), skills.end());
    skills.erase(std::unique(skills.begin(), skills.end()), skills.end());
    return skills;
}

void write_skills(Writer& w, const std::vector<std::string>& skills) {
    auto sorted = canonical_skills(skills);
    w.u32(static_cast<std::uint32_t>(sorted.size()));
    for (const auto& s : sorted) w.str(s);
}

std::vector<std::string> read_skills(Reader& r) {
    std::uint32_t n = r.u32();
    if (n > 4096) fail(ErrorCode::kSerializationFailure, "too many skills");
    std::vector<std::string> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(r.str());
    return out;
}

PublicKey read_key(Reader& r) {
    PublicKey k;
    ByteView b = r.raw(32);
    std::copy(b.begin(), b.end(), k.bytes.begin());
    return k;
}

void write_params(Writer& w, const ProtocolParams& p) {
    w.i64(p.registration_fee)
        .u32(p.evaluators_per_submission)
        .u32(p.evaluations_owed)
        .boolean(p.outlier_k.has_value())
        .i64(p.outlier_k.value_or(Fixed{}).raw())
        .i64(p.outlier_floor.raw())
        .i64(p.alpha.raw())
        .u32(p.max_rounds)
        .u8(static_cast<std::uint8_t>(p.volunteer_threshold))
        .boolean(p.slot_selection);
}

ProtocolParams read_params(Reader& r) {
    ProtocolParams p;
    p.registration_fee = r.i64();
    p.evaluators_per_submission = r.u32();
    p.evaluations_owed = r.u32();
    bool has_k = r.boolean();
    auto k = Fixed::from_raw(r.i64());
    p.outlier_k = has_k ? std::optional<Fixed>(k) : std::nullopt;
    p.outlier_floor = Fixed::from_raw(r.i64());
    p.alpha = Fixed::from_raw(r.i64());
    p.max_rounds = r.u32();
    std::uint8_t mode = r.u8();
    if (mode > 1) fail(ErrorCode::kSerializationFailure, "bad volunteer threshold mode");
    p.volunteer_threshold = static_cast<VolunteerThreshold>(mode);
    p.slot_selection = r.boolean();
    return p;
}

}  // namespace

void encode_params(Writer& w, const ProtocolParams& params) { write_params(w, params); }

OpKind kind_of(const Operation& operation) noexcept {
    return std::visit(
        Overloaded{
            [](const op::Deploy&) { return OpKind::kDeploy; },
            [](const op::Register&) { return OpKind::kRegister; },
            [](const op::Exit&) { return OpKind::kExit; },
            [](const op::PostTask&) { return OpKind::kPostTask; },
            [](const op::CancelTask&) { return OpKind::kCancelTask; },
            [](const op::Apply&) { return OpKind::kApply; },
            [](const op::CreateAgreement&) { return OpKind::kCreateAgreement; },
            [](const op::CancelAgreement&) { return OpKind::kCancelAgreement; },
            [](const op::AcceptAgreement&) { return OpKind::kAcceptAgreement; },
            [](const op::AdvanceTime&) { return OpKind::kAdvanceTime; },
            [](const op::Commit&) { return OpKind::kCommit; },
            [](const op::AssignEvaluators&) { return OpKind::kAssignEvaluators; },
            [](const op::Reveal&) { return OpKind::kReveal; },
            [](const op::BecomeEvaluator&) { return OpKind::kBecomeEvaluator; },
            [](const op::SubmitEvaluation&) { return OpKind::kSubmitEvaluation; },
            [](const op::Reverted&) { return OpKind::kReverted; },
        },
        operation);
}

std::string_view op_kind_name(OpKind kind) noexcept {
    switch (kind) {
        case OpKind::kDeploy: return "deploy";
        case OpKind::kRegister: return "register";
        case OpKind::kExit: return "exit";
        case OpKind::kPostTask: return "post_task";
        case OpKind::kCancelTask: return "cancel_task";
        case OpKind::kApply: return "apply";
        case OpKind::kCreateAgreement: return "create_agreement";
        case OpKind::kCancelAgreement: return "cancel_agreement";
        case OpKind::kAcceptAgreement: return "accept_agreement";
        case OpKind::kAdvanceTime: return "advance_time";
        case OpKind::kCommit: return "commit";
        case OpKind::kAssignEvaluators: return "assign_evaluators";
        case OpKind::kReveal: return "reveal";
        case OpKind::kBecomeEvaluator: return "become_evaluator";
        case OpKind::kSubmitEvaluation: return "submit_evaluation";
        case OpKind::kReverted: return "reverted";
    }
    return "unknown";
}

Bytes encode_operation(const Operation& operation) {
    Writer w;
    w.u8(static_cast<std::uint8_t>(kind_of(operation)));
    std::visit(Overloaded{
                   [&](const op::Deploy& o) {
                       w.raw(o.operator_key.bytes);
                       write_params(w, o.params);
                   },
                   [&](const op::Register& o) {
                       w.u8(static_cast<std::uint8_t>(o.role)).raw(o.public_key.bytes).hash(o.profile_ref);
                       write_skills(w, o.skills);
                       w.i64(o.deposit);
                   },
                   [&](const op::Exit&) {},
                   [&](const op::PostTask& o) {
                       w.str(o.title);
                       write_skills(w, o.skills);
                       w.i64(o.reward).hash(o.metadata_ref).i64(o.weight_completeness.raw()).i64(
                           o.weight_quality.raw());
                   },
                   [&](const op::CancelTask& o) { w.u64(o.task_id); },
                   [&](const op::Apply& o) { w.u64(o.task_id); },
                   [&](const op::CreateAgreement& o) {
                       w.u64(o.task_id)
                           .account(o.worker)
                           .i64(o.escrow)
                           .i64(o.acceptance_fee)
                           .i64(o.acceptance_deadline)
                           .i64(o.due_date);
                   },
                   [&](const op::CancelAgreement& o) { w.u64(o.agreement_id); },
                   [&](const op::AcceptAgreement& o) { w.u64(o.agreement_id).i64(o.deposit); },
                   [&](const op::AdvanceTime& o) { w.i64(o.now); },
                   [&](const op::Commit& o) { w.u64(o.agreement_id).hash(o.commitment); },
                   [&](const op::AssignEvaluators& o) { w.u64(o.submission_id); },
                   [&](const op::Reveal& o) {
                       w.u64(o.submission_id).u32(static_cast<std::uint32_t>(o.envelopes.size()));
                       for (const auto& [who, addr] : o.envelopes) w.account(who).hash(addr);
                   },
                   [&](const op::BecomeEvaluator&) {},
                   [&](const op::SubmitEvaluation& o) {
                       w.u64(o.submission_id).u32(o.completeness).u32(o.quality).hash(o.review_ref);
                   },
                   [&](const op::Reverted& o) {
                       w.u8(o.attempted_kind).u16(static_cast<std::uint16_t>(o.reason));
                   },
               },
               operation);
    return w.take();
}

Operation decode_operation(ByteView payload) {
    Reader r(payload);
    auto kind = static_cast<OpKind>(r.u8());
    Operation out;
    switch (kind) {
        case OpKind::kDeploy: {
            op::Deploy o;
            o.operator_key = read_key(r);
            o.params = read_params(r);
            out = o;
            break;
        }
        case OpKind::kRegister: {
            op::Register o;
            std::uint8_t role = r.u8();
            if (role < 1 || role > 3) fail(ErrorCode::kSerializationFailure, "bad role");
            o.role = static_cast<Role>(role);
            o.public_key = read_key(r);
            o.profile_ref = r.hash();
            o.skills = read_skills(r);
            o.deposit = r.i64();
            out = o;
            break;
        }
        case OpKind::kExit: out = op::Exit{}; break;
        case OpKind::kPostTask: {
            op::PostTask o;
            o.title = r.str();
            o.skills = read_skills(r);
            o.reward = r.i64();
            o.metadata_ref = r.hash();
            o.weight_completeness = Fixed::from_raw(r.i64());
            o.weight_quality = Fixed::from_raw(r.i64());
            out = o;
            break;
        }
        case OpKind::kCancelTask: out = op::CancelTask{r.u64()}; break;
        case OpKind::kApply: out = op::Apply{r.u64()}; break;
        case OpKind::kCreateAgreement: {
            op::CreateAgreement o;
            o.task_id = r.u64();
            o.worker = r.account();
            o.escrow = r.i64();
            o.acceptance_fee = r.i64();
            o.acceptance_deadline = r.i64();
            o.due_date = r.i64();
            out = o;
            break;
        }
        case OpKind::kCancelAgreement: out = op::CancelAgreement{r.u64()}; break;
        case OpKind::kAcceptAgreement: {
            op::AcceptAgreement o;
            o.agreement_id = r.u64();
            o.deposit = r.i64();
            out = o;
            break;
        }
        case OpKind::kAdvanceTime: out = op::AdvanceTime{r.i64()}; break;
        case OpKind::kCommit: {
            op::Commit o;
            o.agreement_id = r.u64();
            o.commitment = r.hash();
            out = o;
            break;
        }
        case OpKind::kAssignEvaluators: out = op::AssignEvaluators{r.u64()}; break;
        case OpKind::kReveal: {
            op::Reveal o;
            o.submission_id = r.u64();
            std::uint32_t n = r.u32();
            if (n > 4096) fail(ErrorCode::kSerializationFailure, "too many envelopes");
            for (std::uint32_t i = 0; i < n; ++i) {
                AccountId who = r.account();
                o.envelopes.emplace_back(who, r.hash());
            }
            out = o;
            break;
        }
        case OpKind::kBecomeEvaluator: out = op::BecomeEvaluator{}; break;
        case OpKind::kSubmitEvaluation: {
            op::SubmitEvaluation o;
            o.submission_id = r.u64();
            o.completeness = r.u32();
            o.quality = r.u32();
            o.review_ref = r.hash();
            out = o;
            break;
        }
        case OpKind::kReverted: {
            op::Reverted o;
            o.attempted_kind = r.u8();
            o.reason = static_cast<ErrorCode>(r.u16());
            out = o;
            break;
        }
        default: fail(ErrorCode::kSerializationFailure, "unknown operation tag");
    }
    r.expect_done();
    return out;
}

}  // namespace workerrep
