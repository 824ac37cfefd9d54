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

#include "workerrep/marketplace.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace workerrep {

std::string_view task_status_name(TaskStatus status) noexcept {
    switch (status) {
        case TaskStatus::kOpen: return "open";
        case TaskStatus::kAgreed: return "agreed";
        case TaskStatus::kSubmitted: return "submitted";
        case TaskStatus::kEvaluated: return "evaluated";
        case TaskStatus::kCancelled: return "cancelled";
    }
    return "unknown";
}

bool valid_task_transition(TaskStatus from, TaskStatus to) noexcept {
    switch (from) {
        case TaskStatus::kOpen: return to == TaskStatus::kAgreed || to == TaskStatus::kCancelled;
        case TaskStatus::kAgreed: return to == TaskStatus::kSubmitted || to == TaskStatus::kCancelled;
        case TaskStatus::kSubmitted: return to == TaskStatus::kEvaluated;
        case TaskStatus::kEvaluated:
        case TaskStatus::kCancelled: return false;
    }
    return false;
}

void check_weights(Fixed weight_completeness, Fixed weight_quality) {
    if (weight_completeness < Fixed{} || weight_quality < Fixed{} ||
        weight_completeness + weight_quality != Fixed::from_int(1)) {
        fail(ErrorCode::kBadWeights,
             weight_completeness.to_string() + " + " + weight_quality.to_string() + " != 1");
    }
}

bool TaskFilter::matches(const Task& task) const {
    if (skills && !std::includes(skills->begin(), skills->end(), task.skills_required.begin(),
                                 task.skills_required.end())) {
        return false;
    }
    if (min_reward && task.reward < *min_reward) return false;
    if (status && task.status != *status) return false;
    return true;
}

const Task& Marketplace::post_task(const AccountId& poster, const op::PostTask& request, Tick now) {
    check_weights(request.weight_completeness, request.weight_quality);
    if (request.reward <= 0) fail(ErrorCode::kNonPositiveReward);
    Task task;
    task.id = tasks_.size();
    task.poster = poster;
    task.title = request.title;
    task.skills_required = {request.skills.begin(), request.skills.end()};
    task.reward = request.reward;
    task.metadata_ref = request.metadata_ref;
    task.weight_completeness = request.weight_completeness;
    task.weight_quality = request.weight_quality;
    task.posted_at = now;
    tasks_.push_back(std::move(task));
    return tasks_.back();
}

void Marketplace::cancel_task(const AccountId& poster, TaskId id) {
    const Task& task = get(id);
    if (task.poster != poster) fail(ErrorCode::kNotTaskOwner);
    if (task.status != TaskStatus::kOpen) fail(ErrorCode::kTaskNotOpen);
    set_status(id, TaskStatus::kCancelled);
}

const Task& Marketplace::apply(const AccountId& worker, TaskId id) {
    const Task& task = get(id);
    if (task.status != TaskStatus::kOpen) fail(ErrorCode::kTaskNotOpen, "task " + std::to_string(id));
    tasks_[id].applicants.insert(worker);
    return tasks_[id];
}

std::vector<Task> Marketplace::search(const TaskFilter& filter) const {
    std::vector<Task> out;
    std::copy_if(tasks_.begin(), tasks_.end(), std::back_inserter(out),
                 [&](const Task& t) { return filter.matches(t); });
    return out;
}

void Marketplace::set_status(TaskId id, TaskStatus next) {
    const Task& task = get(id);
    if (!valid_task_transition(task.status, next)) {
        throw std::logic_error("illegal task transition " + std::string(task_status_name(task.status)) + " -> " +
                               std::string(task_status_name(next)));
    }
    tasks_[id].status = next;
}

const Task* Marketplace::find(TaskId id) const { return id < tasks_.size() ? &tasks_[id] : nullptr; }

const Task& Marketplace::get(TaskId id) const {
    const Task* task = find(id);
    if (task == nullptr) fail(ErrorCode::kUnknownTask, std::to_string(id));
    return *task;
}

void Marketplace::encode(Writer& w) const {
    w.u64(tasks_.size());
    for (const auto& t : tasks_) {
        w.u64(t.id).account(t.poster).str(t.title).u32(static_cast<std::uint32_t>(t.skills_required.size()));
        for (const auto& s : t.skills_required) w.str(s);
        w.i64(t.reward).hash(t.metadata_ref).i64(t.weight_completeness.raw()).i64(t.weight_quality.raw());
        w.u8(static_cast<std::uint8_t>(t.status)).u32(static_cast<std::uint32_t>(t.applicants.size()));
        for (const auto& a : t.applicants) w.account(a);
        w.i64(t.posted_at);
    }
}

std::string Marketplace::listing_json() const {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& t : tasks_) {
        nlohmann::ordered_json applicants = nlohmann::ordered_json::array();
        for (const auto& a : t.applicants) applicants.push_back(a.hex());
        doc.push_back({{"task_id", t.id},
                       {"poster", t.poster.hex()},
                       {"title", t.title},
                       {"skills", t.skills_required},
                       {"reward", t.reward},
                       {"w_c", t.weight_completeness.to_string()},
                       {"w_q", t.weight_quality.to_string()},
                       {"status", task_status_name(t.status)},
                       {"applicants", applicants}});
    }
    return doc.dump(2) + "\n";
}

std::string Marketplace::listing_csv() const {
    std::ostringstream out;
    out << "task_id,poster,title,reward,status,applicants\n";
    for (const auto& t : tasks_) {
        out << t.id << ',' << t.poster.hex() << ",\"" << t.title << "\"," << t.reward << ','
            << task_status_name(t.status) << ',' << t.applicants.size() << '\n';
    }
    return out.str();
}

}  // namespace workerrep
