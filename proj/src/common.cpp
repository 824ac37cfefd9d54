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

#include "workerrep/common.hpp"

#include <algorithm>
#include <limits>

namespace workerrep {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

template <std::size_t N>
std::array<std::uint8_t, N> fixed_from_hex(std::string_view hex) {
    Bytes raw = from_hex(hex);
    if (raw.size() != N) {
        fail(ErrorCode::kSerializationFailure, "expected " + std::to_string(N) + " hex bytes");
    }
    std::array<std::uint8_t, N> out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

}  // namespace

std::string to_hex(ByteView data) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() % 2 != 0) fail(ErrorCode::kSerializationFailure, "odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) fail(ErrorCode::kSerializationFailure, "invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

Hash256 Hash256::from_hex(std::string_view hex) { return Hash256{fixed_from_hex<32>(hex)}; }

std::string Hash256::hex() const { return to_hex(bytes); }

bool Hash256::is_zero() const noexcept {
    return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

AccountId AccountId::from_hex(std::string_view hex) { return AccountId{fixed_from_hex<20>(hex)}; }

std::string AccountId::hex() const { return "0x" + to_hex(bytes); }

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::kNone: return "None";
        case ErrorCode::kUnknownSender: return "UnknownSender";
        case ErrorCode::kSerializationFailure: return "SerializationFailure";
        case ErrorCode::kInvalidChain: return "InvalidChain";
        case ErrorCode::kBadSignature: return "BadSignature";
        case ErrorCode::kInsufficientDeposit: return "InsufficientDeposit";
        case ErrorCode::kDuplicateKey: return "DuplicateKey";
        case ErrorCode::kOpenObligations: return "OpenObligations";
        case ErrorCode::kAlreadyExited: return "AlreadyExited";
        case ErrorCode::kNotAWorker: return "NotAWorker";
        case ErrorCode::kUnknownAccount: return "UnknownAccount";
        case ErrorCode::kBadWeights: return "BadWeights";
        case ErrorCode::kNonPositiveReward: return "NonPositiveReward";
        case ErrorCode::kNotATaskPoster: return "NotATaskPoster";
        case ErrorCode::kTaskNotOpen: return "TaskNotOpen";
        case ErrorCode::kUnknownWorker: return "UnknownWorker";
        case ErrorCode::kUnknownTask: return "UnknownTask";
        case ErrorCode::kNotTaskOwner: return "NotTaskOwner";
        case ErrorCode::kWrongEscrowAmount: return "WrongEscrowAmount";
        case ErrorCode::kNotAnApplicant: return "NotAnApplicant";
        case ErrorCode::kBadDeadlines: return "BadDeadlines";
        case ErrorCode::kWrongCaller: return "WrongCaller";
        case ErrorCode::kExpired: return "Expired";
        case ErrorCode::kWrongDeposit: return "WrongDeposit";
        case ErrorCode::kNotAccepted: return "NotAccepted";
        case ErrorCode::kNotEvaluated: return "NotEvaluated";
        case ErrorCode::kUnknownAgreement: return "UnknownAgreement";
        case ErrorCode::kNotCancellable: return "NotCancellable";
        case ErrorCode::kTimeReversal: return "TimeReversal";
        case ErrorCode::kPastDue: return "PastDue";
        case ErrorCode::kAlreadyCommitted: return "AlreadyCommitted";
        case ErrorCode::kCommitmentMismatch: return "CommitmentMismatch";
        case ErrorCode::kNotCommitted: return "NotCommitted";
        case ErrorCode::kNotAssigned: return "NotAssigned";
        case ErrorCode::kAuthFailure: return "AuthFailure";
        case ErrorCode::kUnknownSubmission: return "UnknownSubmission";
        case ErrorCode::kNotRevealed: return "NotRevealed";
        case ErrorCode::kBadReveal: return "BadReveal";
        case ErrorCode::kInsufficientEvaluators: return "InsufficientEvaluators";
        case ErrorCode::kNotSelected: return "NotSelected";
        case ErrorCode::kOutOfRange: return "OutOfRange";
        case ErrorCode::kDuplicateScore: return "DuplicateScore";
        case ErrorCode::kIncompleteSheet: return "IncompleteSheet";
        case ErrorCode::kMaxRoundsExceeded: return "MaxRoundsExceeded";
        case ErrorCode::kBelowThreshold: return "BelowThreshold";
        case ErrorCode::kRoundInProgress: return "RoundInProgress";
        case ErrorCode::kAlreadyEnrolled: return "AlreadyEnrolled";
        case ErrorCode::kEmptyConsensus: return "EmptyConsensus";
        case ErrorCode::kZeroTotalReputation: return "ZeroTotalReputation";
        case ErrorCode::kQuotaUnmet: return "QuotaUnmet";
        case ErrorCode::kIncompleteTrace: return "IncompleteTrace";
        case ErrorCode::kConfigInvalid: return "ConfigInvalid";
        case ErrorCode::kDeadlock: return "Deadlock";
        case ErrorCode::kBadGenesis: return "BadGenesis";
    }
    return "Unknown";
}

ProtocolError::ProtocolError(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + (what.empty() ? "" : ": " + what)), code_(code) {}

void fail(ErrorCode code, const std::string& detail) { throw ProtocolError(code, detail); }

Wei checked_add(Wei a, Wei b) {
    Wei out{};
    if (__builtin_add_overflow(a, b, &out)) fail(ErrorCode::kOutOfRange, "currency overflow");
    return out;
}

Wei checked_sub(Wei a, Wei b) {
    Wei out{};
    if (__builtin_sub_overflow(a, b, &out)) fail(ErrorCode::kOutOfRange, "currency overflow");
    return out;
}

}  // namespace workerrep
