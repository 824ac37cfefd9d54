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

#include "workerrep/accounts.hpp"

#include <algorithm>

#include <json.hpp>

namespace workerrep {

Wei exit_refund(Wei deposit, Fixed reputation, Fixed average, bool sole_active_worker) {
    if (deposit <= 0) return 0;
    if (sole_active_worker || reputation >= average) return deposit;
    if (reputation <= Fixed{}) return 0;
    return floor_div(Int128{deposit} * reputation.raw(), average.raw());
}

const UserAccount& AccountRegistry::register_account(const op::Register& request, Wei registration_fee, Tick now) {
    if (request.role == Role::kOperator) fail(ErrorCode::kBadGenesis, "operators are created at deployment");
    if (request.deposit < registration_fee || request.deposit < 0) {
        fail(ErrorCode::kInsufficientDeposit,
             "paid " + std::to_string(request.deposit) + ", fee is " + std::to_string(registration_fee));
    }
    if (keys_.contains(request.public_key)) fail(ErrorCode::kDuplicateKey);
    AccountId id = account_of(request.public_key);
    if (accounts_.contains(id)) fail(ErrorCode::kDuplicateKey, "address collision");
    Wei fees = checked_add(fees_in_, request.deposit);

    UserAccount account;
    account.id = id;
    account.role = request.role;
    account.public_key = request.public_key;
    account.profile_ref = request.profile_ref;
    account.reputation = request.role == Role::kWorker ? kNewWorkerReputation : Fixed{};
    account.deposit = request.deposit;
    account.skills = {request.skills.begin(), request.skills.end()};
    account.registered_at = now;

    fees_in_ = fees;
    keys_.insert(request.public_key);
    return accounts_.emplace(id, std::move(account)).first->second;
}

const UserAccount& AccountRegistry::register_operator(const PublicKey& key, Tick now) {
    if (keys_.contains(key)) fail(ErrorCode::kDuplicateKey);
    UserAccount account;
    account.id = account_of(key);
    account.role = Role::kOperator;
    account.public_key = key;
    account.registered_at = now;
    keys_.insert(key);
    return accounts_.emplace(account.id, std::move(account)).first->second;
}

Wei AccountRegistry::exit(const AccountId& id) {
    UserAccount& account = mutable_get(id);
    if (!account.active()) fail(ErrorCode::kAlreadyExited);
    Wei refund = account.deposit;
    if (account.is_worker()) {
        PlatformStats s = stats();
        refund = exit_refund(account.deposit, account.reputation, s.avg_worker_reputation, s.active_worker_count == 1);
    }
    refunds_paid_ = checked_add(refunds_paid_, refund);
    platform_pool_ = checked_add(platform_pool_, account.deposit - refund);
    account.deposit = 0;
    account.status = AccountStatus::kExited;
    return refund;
}

Fixed AccountRegistry::update_reputation(const AccountId& id, Fixed delta) {
    UserAccount& account = mutable_get(id);
    if (!account.is_worker() || !account.active()) fail(ErrorCode::kNotAWorker, id.hex());
    Fixed next = account.reputation + delta;
    account.reputation = std::max(next, Fixed{});
    return account.reputation;
}

PlatformStats AccountRegistry::stats() const {
    Int128 total = 0;
    std::uint64_t n = 0;
    for (const auto& [id, account] : accounts_) {
        if (account.is_worker() && account.active()) {
            total += account.reputation.raw();
            ++n;
        }
    }
    if (n == 0) return {};
    return {Fixed::from_raw(floor_div(total, n)), n};
}

const UserAccount* AccountRegistry::find(const AccountId& id) const {
    auto it = accounts_.find(id);
    return it == accounts_.end() ? nullptr : &it->second;
}

const UserAccount& AccountRegistry::get(const AccountId& id) const {
    const UserAccount* account = find(id);
    if (account == nullptr) fail(ErrorCode::kUnknownAccount, id.hex());
    return *account;
}

UserAccount& AccountRegistry::mutable_get(const AccountId& id) {
    auto it = accounts_.find(id);
    if (it == accounts_.end()) fail(ErrorCode::kUnknownAccount, id.hex());
    return it->second;
}

Wei AccountRegistry::deposits_held() const {
    Wei total = 0;
    for (const auto& [id, account] : accounts_) total = checked_add(total, account.deposit);
    return total;
}

void AccountRegistry::encode(Writer& w) const {
    w.u64(accounts_.size());
    for (const auto& [id, a] : accounts_) {
        w.account(id).u8(static_cast<std::uint8_t>(a.role)).raw(a.public_key.bytes).hash(a.profile_ref);
        w.i64(a.reputation.raw()).i64(a.deposit).u32(static_cast<std::uint32_t>(a.skills.size()));
        for (const auto& s : a.skills) w.str(s);
        w.u8(static_cast<std::uint8_t>(a.status)).i64(a.registered_at);
    }
    w.i64(fees_in_).i64(refunds_paid_).i64(platform_pool_);
}

std::string AccountRegistry::roster_json() const {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& [id, a] : accounts_) {
        doc.push_back({{"account_id", id.hex()},
                       {"role", role_name(a.role)},
                       {"reputation", a.reputation.to_string()},
                       {"deposit", a.deposit},
                       {"status", a.active() ? "active" : "exited"}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace workerrep
