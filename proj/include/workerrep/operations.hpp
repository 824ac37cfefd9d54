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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "workerrep/codec.hpp"
#include "workerrep/common.hpp"
#include "workerrep/crypto.hpp"
#include "workerrep/fixed.hpp"

namespace workerrep {

enum class Role : std::uint8_t { kWorker = 1, kTaskPoster = 2, kOperator = 3 };

std::string_view role_name(Role role) noexcept;

enum class VolunteerThreshold : std::uint8_t { kPlatformAverage = 0, kNone = 1 };

// Protocol parameters fixed at deployment and carried in the genesis entry.
struct ProtocolParams {
    Wei registration_fee{11'800'000'000'000'000};  // 0.0118 ether
    std::uint32_t evaluators_per_submission{3};     // x
    std::uint32_t evaluations_owed{2};              // y
    std::optional<Fixed> outlier_k{Fixed::from_int(1)};  // nullopt: outlier removal off
    Fixed outlier_floor{};                          // minimum absolute deviation (score points)
    Fixed alpha{Fixed::from_raw(2'500)};
    std::uint32_t max_rounds{3};
    VolunteerThreshold volunteer_threshold{VolunteerThreshold::kPlatformAverage};
    bool slot_selection{true};

    void validate() const;
    bool operator==(const ProtocolParams&) const = default;
};

namespace op {

struct Deploy {
    PublicKey operator_key;
    ProtocolParams params;
};

struct Register {
    Role role{Role::kWorker};
    PublicKey public_key;
    Hash256 profile_ref;
    std::vector<std::string> skills;
    Wei deposit{0};
};

struct Exit {};

struct PostTask {
    std::string title;
    std::vector<std::string> skills;
    Wei reward{0};
    Hash256 metadata_ref;
    Fixed weight_completeness;
    Fixed weight_quality;
};

struct CancelTask {
    TaskId task_id{0};
};

struct Apply {
    TaskId task_id{0};
};

struct CreateAgreement {
    TaskId task_id{0};
    AccountId worker;
    Wei escrow{0};
    Wei acceptance_fee{0};
    Tick acceptance_deadline{0};
    Tick due_date{0};
};

struct CancelAgreement {
    AgreementId agreement_id{0};
};

struct AcceptAgreement {
    AgreementId agreement_id{0};
    Wei deposit{0};
};

struct AdvanceTime {
    Tick now{0};
};

struct Commit {
    AgreementId agreement_id{0};
    Hash256 commitment;
};

struct AssignEvaluators {
    SubmissionId submission_id{0};
};

struct Reveal {
    SubmissionId submission_id{0};
    std::vector<std::pair<AccountId, Hash256>> envelopes;
};

struct BecomeEvaluator {};

struct SubmitEvaluation {
    SubmissionId submission_id{0};
    std::uint32_t completeness{0};
    std::uint32_t quality{0};
    Hash256 review_ref;
};

// A call that was rejected but still consumed gas (e.g. accept by the wrong worker).
struct Reverted {
    std::uint8_t attempted_kind{0};
    ErrorCode reason{ErrorCode::kNone};
};

}  // namespace op

using Operation = std::variant<op::Deploy, op::Register, op::Exit, op::PostTask, op::CancelTask, op::Apply,
                               op::CreateAgreement, op::CancelAgreement, op::AcceptAgreement, op::AdvanceTime,
                               op::Commit, op::AssignEvaluators, op::Reveal, op::BecomeEvaluator,
                               op::SubmitEvaluation, op::Reverted>;

// Wire tag of each alternative; stable across versions.
enum class OpKind : std::uint8_t {
    kDeploy = 1,
    kRegister = 2,
    kExit = 3,
    kPostTask = 4,
    kCancelTask = 5,
    kApply = 6,
    kCreateAgreement = 7,
    kCancelAgreement = 8,
    kAcceptAgreement = 9,
    kAdvanceTime = 10,
    kCommit = 11,
    kAssignEvaluators = 12,
    kReveal = 13,
    kBecomeEvaluator = 14,
    kSubmitEvaluation = 15,
    kReverted = 16,
};

void encode_params(Writer& w, const ProtocolParams& params);

OpKind kind_of(const Operation& operation) noexcept;
std::string_view op_kind_name(OpKind kind) noexcept;

Bytes encode_operation(const Operation& operation);
// Throws SerializationFailure on malformed or non-canonical input.
Operation decode_operation(ByteView payload);

}  // namespace workerrep
