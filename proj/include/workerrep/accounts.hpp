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

#include <map>
#include <optional>
#include <set>
#include <string>

#include "workerrep/codec.hpp"
#include "workerrep/common.hpp"
#include "workerrep/crypto.hpp"
#include "workerrep/fixed.hpp"
#include "workerrep/operations.hpp"

namespace workerrep {

enum class AccountStatus : std::uint8_t { kActive = 1, kExited = 2 };

struct UserAccount {
    AccountId id;
    Role role{Role::kWorker};
    PublicKey public_key;
    Hash256 profile_ref;
    Fixed reputation;  // workers start at 1.0; never negative
    Wei deposit{0};
    std::set<std::string> skills;
    AccountStatus status{AccountStatus::kActive};
    Tick registered_at{0};

    [[nodiscard]] bool active() const noexcept { return status == AccountStatus::kActive; }
    [[nodiscard]] bool is_worker() const noexcept { return role == Role::kWorker; }
};

struct PlatformStats {
    Fixed avg_worker_reputation;
    std::uint64_t active_worker_count{0};
};

inline constexpr Fixed kNewWorkerReputation = Fixed::from_int(1);

// floor(deposit * min(1, reputation / average)); the whole deposit when the
// account is the only active worker or sits at or above the average.
Wei exit_refund(Wei deposit, Fixed reputation, Fixed average, bool sole_active_worker);

class AccountRegistry {
  public:
    // Throws InsufficientDeposit, DuplicateKey.
    const UserAccount& register_account(const op::Register& request, Wei registration_fee, Tick now);
    const UserAccount& register_operator(const PublicKey& key, Tick now);

    // Marks the account exited and returns the refund; the rest of the deposit
    // goes to the platform pool. Open-obligation checks belong to the caller.
    // Throws AlreadyExited, UnknownAccount.
    Wei exit(const AccountId& id);

    // reputation := max(0, reputation + delta). Throws NotAWorker.
    Fixed update_reputation(const AccountId& id, Fixed delta);

    [[nodiscard]] PlatformStats stats() const;

    [[nodiscard]] const UserAccount* find(const AccountId& id) const;
    [[nodiscard]] const UserAccount& get(const AccountId& id) const;
    [[nodiscard]] const std::map<AccountId, UserAccount>& all() const noexcept { return accounts_; }

    [[nodiscard]] Wei fees_in() const noexcept { return fees_in_; }
    [[nodiscard]] Wei deposits_held() const;
    [[nodiscard]] Wei refunds_paid() const noexcept { return refunds_paid_; }
    [[nodiscard]] Wei platform_pool() const noexcept { return platform_pool_; }

    void encode(Writer& w) const;
    [[nodiscard]] std::string roster_json() const;

  private:
    UserAccount& mutable_get(const AccountId& id);

    std::map<AccountId, UserAccount> accounts_;
    std::set<PublicKey> keys_;
    Wei fees_in_{0};
    Wei refunds_paid_{0};
    Wei platform_pool_{0};
};

}  // namespace workerrep
