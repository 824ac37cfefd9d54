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
#include <set>
#include <string>
#include <vector>

#include "workerrep/codec.hpp"
#include "workerrep/common.hpp"
#include "workerrep/fixed.hpp"
#include "workerrep/operations.hpp"

namespace workerrep {

enum class TaskStatus : std::uint8_t { kOpen = 0, kAgreed, kSubmitted, kEvaluated, kCancelled };

std::string_view task_status_name(TaskStatus status) noexcept;
bool valid_task_transition(TaskStatus from, TaskStatus to) noexcept;

struct Task {
    TaskId id{0};
    AccountId poster;
    std::string title;
    std::set<std::string> skills_required;
    Wei reward{0};
    Hash256 metadata_ref;
    Fixed weight_completeness;
    Fixed weight_quality;
    TaskStatus status{TaskStatus::kOpen};
    std::set<AccountId> applicants;
    Tick posted_at{0};
};

// Every provided predicate must hold. `skills` selects tasks whose required
// skills are all contained in the given set (i.e. tasks the holder can do).
struct TaskFilter {
    std::optional<std::set<std::string>> skills;
    std::optional<Wei> min_reward;
    std::optional<TaskStatus> status;

    [[nodiscard]] bool matches(const Task& task) const;
};

class Marketplace {
  public:
    // Role checks on the poster are the caller's. Throws BadWeights, NonPositiveReward.
    const Task& post_task(const AccountId& poster, const op::PostTask& request, Tick now);
    // Throws UnknownTask, NotTaskOwner, TaskNotOpen.
    void cancel_task(const AccountId& poster, TaskId id);
    // Idempotent set insert. Throws UnknownTask, TaskNotOpen.
    const Task& apply(const AccountId& worker, TaskId id);

    // Pure read, ordered by task id.
    [[nodiscard]] std::vector<Task> search(const TaskFilter& filter) const;

    // Throws if the transition is not in the task lifecycle.
    void set_status(TaskId id, TaskStatus next);

    [[nodiscard]] const Task& get(TaskId id) const;
    [[nodiscard]] const Task* find(TaskId id) const;
    [[nodiscard]] const std::vector<Task>& all() const noexcept { return tasks_; }

    void encode(Writer& w) const;
    [[nodiscard]] std::string listing_json() const;
    [[nodiscard]] std::string listing_csv() const;

  private:
    std::vector<Task> tasks_;
};

void check_weights(Fixed weight_completeness, Fixed weight_quality);

}  // namespace workerrep
