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

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace workerrep {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Currency in wei-equivalent integer units.
using Wei = std::int64_t;
// Discrete simulation time.
using Tick = std::int64_t;

using TaskId = std::uint64_t;
using AgreementId = std::uint64_t;
using SubmissionId = std::uint64_t;

inline constexpr Wei kWeiPerEther = 1'000'000'000'000'000'000;

// 256-bit digest.
struct Hash256 {
    std::array<std::uint8_t, 32> bytes{};

    static Hash256 from_hex(std::string_view hex);
    [[nodiscard]] std::string hex() const;
    [[nodiscard]] bool is_zero() const noexcept;

    auto operator<=>(const Hash256&) const = default;
};

// 20-byte account address, the tail of the Keccak-256 digest of a public key.
struct AccountId {
    std::array<std::uint8_t, 20> bytes{};

    static AccountId from_hex(std::string_view hex);
    [[nodiscard]] std::string hex() const;

    auto operator<=>(const AccountId&) const = default;
};

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

enum class ErrorCode : std::uint16_t {
    kNone = 0,
    // ledger
    kUnknownSender,
    kSerializationFailure,
    kInvalidChain,
    kBadSignature,
    // accounts
    kInsufficientDeposit,
    kDuplicateKey,
    kOpenObligations,
    kAlreadyExited,
    kNotAWorker,
    kUnknownAccount,
    // marketplace
    kBadWeights,
    kNonPositiveReward,
    kNotATaskPoster,
    kTaskNotOpen,
    kUnknownWorker,
    kUnknownTask,
    kNotTaskOwner,
    // agreement
    kWrongEscrowAmount,
    kNotAnApplicant,
    kBadDeadlines,
    kWrongCaller,
    kExpired,
    kWrongDeposit,
    kNotAccepted,
    kNotEvaluated,
    kUnknownAgreement,
    kNotCancellable,
    kTimeReversal,
    // submission
    kPastDue,
    kAlreadyCommitted,
    kCommitmentMismatch,
    kNotCommitted,
    kNotAssigned,
    kAuthFailure,
    kUnknownSubmission,
    kNotRevealed,
    kBadReveal,
    // evaluation
    kInsufficientEvaluators,
    kNotSelected,
    kOutOfRange,
    kDuplicateScore,
    kIncompleteSheet,
    kMaxRoundsExceeded,
    kBelowThreshold,
    kRoundInProgress,
    kAlreadyEnrolled,
    // reputation
    kEmptyConsensus,
    kZeroTotalReputation,
    kQuotaUnmet,
    // gas
    kIncompleteTrace,
    // config / sim
    kConfigInvalid,
    kDeadlock,
    kBadGenesis,
};

std::string_view error_name(ErrorCode code) noexcept;

// Every protocol rule violation surfaces as a ProtocolError carrying its code.
class ProtocolError : public std::runtime_error {
  public:
    ProtocolError(ErrorCode code, const std::string& what);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail = {});

// Overflow-checked currency arithmetic.
Wei checked_add(Wei a, Wei b);
Wei checked_sub(Wei a, Wei b);

}  // namespace workerrep
