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

#include "workerrep/sim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "workerrep/keccak.hpp"

namespace workerrep::sim {

double CollusionStats::standard_error() const { return std::sqrt(variance); }

double ReciprocityStats::empirical_rate() const {
    return opportunities == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(opportunities);
}
double ReciprocityStats::expected_rate() const {
    return opportunities == 0 ? 0.0 : expected / static_cast<double>(opportunities);
}
double ReciprocityStats::standard_error() const { return std::sqrt(variance); }

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// mt19937_64 is fully specified by the standard; the distributions are not,
// so draws are mapped to ranges here.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~0ULL - (~0ULL % bound);
        for (;;) {
            std::uint64_t v = engine_();
            if (v < limit) return v % bound;
        }
    }
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

  private:
    std::mt19937_64 engine_;
};

enum class AgentKind : std::uint8_t { kPoster, kWorker, kHelper };

struct Agent {
    std::uint32_t index{0};
    AgentKind kind{AgentKind::kWorker};
    std::string group;
    Archetype archetype{Archetype::kHonest};
    bool target{false};
    std::uint32_t quality{0};
    std::vector<std::string> skills;
    Tick join_at{0};
    std::uint32_t generation{0};
    KeyPair key;
    bool registered{false};
    Rng rng{0};
    std::optional<std::uint32_t> principal;  // helpers inflate this agent

    std::optional<TaskId> applied;
    std::optional<AgreementId> job;
    Tick accepted_at{0};
    std::vector<SubmissionId> submissions;
    std::map<SubmissionId, std::string> plaintexts;
    std::set<AccountId> grudges;
    Wei sybil_budget{0};
    std::uint32_t spawned{0};
    Tick next_spawn{0};

    Wei outflow{0};  // paid into the platform minus received back

    [[nodiscard]] AccountId account() const { return key.account(); }
    [[nodiscard]] bool works() const { return kind == AgentKind::kWorker; }
};

std::uint32_t clamp_score(std::int64_t v) { return static_cast<std::uint32_t>(std::clamp<std::int64_t>(v, 1, 100)); }

// P(at least two of the marked members are drawn), given per-draw
// independent marked probabilities.
double prob_two_or_more(const std::vector<double>& p) {
    double none = 1.0;
    double one = 0.0;
    for (double q : p) {
        one = one * (1 - q) + none * q;
        none *= (1 - q);
    }
    return std::max(0.0, 1.0 - none - one);
}

double choose(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

class Simulation {
  public:
    explicit Simulation(const ScenarioConfig& config) : config_(config), platform_(make_schedule(config)) {
        operator_key_ = KeyPair::from_seed(derive("operator", 0, 0));
    }

    RunResult run();

  private:
    static GasSchedule make_schedule(const ScenarioConfig& c) {
        GasSchedule s;
        s.gas_price_gwei = c.gas_price_gwei;
        s.ether_usd = c.ether_usd;
        return s;
    }

    Hash256 derive(std::string_view label, std::uint64_t index, std::uint64_t generation) const {
        Writer w;
        w.str("workerrep/sim").u64(config_.seed).str(label).u64(index).u64(generation);
        return keccak256(w.data());
    }

    const PlatformState& state() const { return platform_.state(); }

    Agent& add_agent(AgentKind kind, const std::string& group, Archetype archetype) {
        Agent a;
        a.index = static_cast<std::uint32_t>(agents_.size());
        a.kind = kind;
        a.group = group;
        a.archetype = archetype;
        a.rng = Rng(splitmix64(config_.seed ^ splitmix64(a.index + 1)));
        a.key = KeyPair::from_seed(derive("agent", a.index, 0));
        agents_.push_back(std::move(a));
        return agents_.back();
    }

    void absorb(const Receipt& r) {
        for (const auto& e : r.events) {
            const Agreement& a = state().agreements.get(e.agreement_id);
            if (e.to_worker != 0) owner(a.worker).outflow -= e.to_worker;
            if (e.to_poster != 0) owner(a.poster).outflow -= e.to_poster;
        }
    }

    Agent& owner(const AccountId& id) { return agents_.at(by_account_.at(id)); }

    bool call(Agent& a, const Operation& op) {
        try {
            absorb(platform_.submit(a.key, op));
            return true;
        } catch (const ProtocolError& e) {
            ++report_.rejected_calls;
            ++report_.rejected_by_reason[std::string(op_kind_name(kind_of(op))) + ":" +
                                         std::string(error_name(e.code()))];
            return false;
        }
    }

    bool register_agent(Agent& a) {
        Role role = a.kind == AgentKind::kPoster ? Role::kTaskPoster : Role::kWorker;
        Wei fee = state().params.registration_fee;
        op::Register reg{role, a.key.public_key(), keccak256(a.key.public_key().hex()), a.skills, fee};
        if (!call(a, reg)) return false;
        a.registered = true;
        a.outflow += fee;
        by_account_[a.account()] = a.index;
        if (role == Role::kWorker) ++report_.identities;
        return true;
    }

    void bootstrap();
    void join_late(Tick t);
    void post_tasks(Tick t);
    void act(Agent& a);
    void act_poster(Agent& a);
    void act_worker(Agent& a);
    void evaluate_open(Agent& a);
    void evaluate(Agent& a, SubmissionId sub);
    void manage_job(Agent& a);
    void follow_up(Agent& a);
    void seek_work(Agent& a);
    void maybe_enroll(Agent& a);
    void maybe_reenter(Agent& a);
    void maybe_spawn(Agent& a);
    void request_evaluators(Agent& a, SubmissionId sub);
    void observe_round(SubmissionId sub, const EvaluationRound& round);
    void settle_finished();
    void record_metrics(Tick t);
    bool finished() const;
    [[noreturn]] void deadlock(Tick t) const;
    Wei residual() const;
    void finish(RunResult& out);

    bool is_adversary(const Agent& a) const { return a.works() && a.archetype != Archetype::kHonest; }
    std::set<AccountId> accounts_of(Archetype archetype) const {
        std::set<AccountId> out;
        for (const auto& a : agents_) {
            if (a.registered && a.works() && a.archetype == archetype) out.insert(a.account());
        }
        return out;
    }

    const ScenarioConfig& config_;
    Platform platform_;
    KeyPair operator_key_;
    std::vector<Agent> agents_;
    std::vector<std::uint32_t> posters_;
    std::map<AccountId, std::uint32_t> by_account_;
    std::set<SubmissionId> open_subs_;
    std::uint32_t regular_posted_{0};
    std::uint32_t starter_posted_{0};
    std::uint32_t next_poster_{0};
    Tick starter_start_{1};
    Tick now_{0};
    std::set<TaskId> starter_tasks_;
    std::map<AccountId, Fixed> last_rep_;
    RunReport report_;
};

void Simulation::bootstrap() {
    ProtocolParams params = config_.params;
    platform_.submit(operator_key_, op::Deploy{operator_key_.public_key(), params});

    for (std::uint32_t i = 0; i < config_.posters; ++i) {
        Agent& p = add_agent(AgentKind::kPoster, "posters", Archetype::kHonest);
        posters_.push_back(p.index);
        register_agent(p);
    }
    starter_start_ = 0;
    for (const auto& g : config_.workers) {
        for (std::uint32_t i = 0; i < g.count; ++i) {
            Agent& a = add_agent(AgentKind::kWorker, g.name, g.archetype);
            a.target = g.target;
            a.skills = g.skills;
            a.join_at = g.join_at;
            a.quality = static_cast<std::uint32_t>(a.rng.between(g.quality_min, g.quality_max));
            if (g.archetype == Archetype::kSybilSpawner) {
                a.sybil_budget = config_.adversary.sybil_budget;
                a.next_spawn = g.join_at;
            }
        }
        if (g.join_at > 0 && (starter_start_ == 0 || g.join_at < starter_start_)) starter_start_ = g.join_at;
    }
    if (starter_start_ == 0) starter_start_ = 1;
    join_late(0);
}

void Simulation::join_late(Tick t) {
    std::size_t n = agents_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (agents_[i].registered || agents_[i].kind != AgentKind::kWorker || agents_[i].join_at != t ||
            agents_[i].generation != 0) {
            continue;
        }
        if (!register_agent(agents_[i])) continue;
        // Ballot-stuffers bring their helpers along.
        if (agents_[i].archetype != Archetype::kBallotStuffer) continue;
        for (std::uint32_t h = 0; h < config_.adversary.stuffer_helpers; ++h) {
            Agent& helper = add_agent(AgentKind::kHelper, agents_[i].group + "-helper", Archetype::kBallotStuffer);
            helper.principal = static_cast<std::uint32_t>(i);
            helper.skills = agents_[i].skills;
            register_agent(helper);
        }
    }
}

void Simulation::post_tasks(Tick t) {
    auto post = [&](Wei reward, bool starter) {
        Agent& poster = agents_[posters_[next_poster_++ % posters_.size()]];
        Fixed wc = config_.tasks.weight_completeness;
        op::PostTask task{starter ? "starter task" : "task", config_.tasks.skills, reward,
                          derive("task-meta", regular_posted_ + starter_posted_, 0), wc, Fixed::from_int(1) - wc};
        if (!call(poster, task)) return;
        TaskId id = state().market.all().back().id;
        if (starter) starter_tasks_.insert(id);
    };
    for (std::uint32_t i = 0; i < config_.tasks.per_tick && regular_posted_ < config_.tasks.count; ++i) {
        Agent& poster = agents_[posters_[next_poster_ % posters_.size()]];
        Wei reward = poster.rng.between(config_.tasks.reward_min, config_.tasks.reward_max);
        ++regular_posted_;
        post(reward, false);
    }
    if (t >= starter_start_ && starter_posted_ < config_.tasks.starter_count) {
        ++starter_posted_;
        post(config_.tasks.starter_reward, true);
    }
}

void Simulation::act(Agent& a) {
    if (a.kind == AgentKind::kPoster) {
        act_poster(a);
    } else {
        act_worker(a);
    }
}

void Simulation::act_poster(Agent& p) {
    const AccountId me = p.account();
    const Tick stale_after = 3 * config_.windows.due;
    std::vector<TaskId> mine;
    for (const auto& task : state().market.all()) {
        if (task.poster == me && task.status == TaskStatus::kOpen) mine.push_back(task.id);
    }
    for (TaskId id : mine) {
        const Task& task = state().market.get(id);
        std::vector<const UserAccount*> candidates;
        for (const auto& w : task.applicants) {
            const UserAccount* acc = state().accounts.find(w);
            if (acc != nullptr && acc->active()) candidates.push_back(acc);
        }
        if (candidates.empty()) {
            if (now_ - task.posted_at >= stale_after) call(p, op::CancelTask{id});
            continue;
        }
        const UserAccount* pick = nullptr;
        if (starter_tasks_.contains(id)) {
            // Starter work goes to the least established applicant.
            pick = *std::min_element(candidates.begin(), candidates.end(), [](const auto* x, const auto* y) {
                return std::tie(x->reputation, x->id) < std::tie(y->reputation, y->id);
            });
        } else {
            pick = candidates[p.rng.below(candidates.size())];
        }
        Wei fee = static_cast<Wei>(static_cast<Int128>(task.reward) * config_.acceptance_fee_bps / 10'000);
        op::CreateAgreement offer{id, pick->id, task.reward, fee, now_ + config_.windows.accept,
                                  now_ + config_.windows.due};
        if (call(p, offer)) p.outflow += offer.escrow;
    }
}

void Simulation::act_worker(Agent& a) {
    if (!a.registered) return;
    if (!state().accounts.get(a.account()).active()) return;
    evaluate_open(a);
    if (a.works()) {
        manage_job(a);
        follow_up(a);
        seek_work(a);
    }
    maybe_enroll(a);
    if (a.archetype == Archetype::kReentrant && a.works()) maybe_reenter(a);
    if (a.archetype == Archetype::kSybilSpawner && a.works()) maybe_spawn(a);
}

void Simulation::evaluate_open(Agent& a) {
    const AccountId me = a.account();
    std::vector<SubmissionId> todo;
    for (SubmissionId sub : open_subs_) {
        const EvaluationRecord& rec = state().evaluations.get(sub);
        const EvaluationRound* round = rec.current();
        if (rec.finalized() || round == nullptr || round->result) continue;
        if (!round->is_selected(me) || round->has_scored(me)) continue;
        if (!state().submissions.get(sub).revealed) continue;
        todo.push_back(sub);
    }
    for (SubmissionId sub : todo) evaluate(a, sub);
}

void Simulation::evaluate(Agent& a, SubmissionId sub) {
    Bytes plain;
    try {
        plain = platform_.fetch_for_evaluator(a.key, sub);
    } catch (const ProtocolError& e) {
        ++report_.rejected_calls;
        ++report_.rejected_by_reason["fetch:" + std::string(error_name(e.code()))];
        return;
    }
    std::string text(plain.begin(), plain.end());
    auto pos = text.find("quality=");
    std::int64_t q = pos == std::string::npos ? 50 : std::stoll(text.substr(pos + 8));

    const AccountId author = state().submissions.get(sub).worker;
    const Agent& worker = owner(author);
    const std::int64_t noise = config_.noise;
    const std::int64_t mag = config_.adversary.magnitude;
    std::int64_t bias = 0;
    bool biased = false;
    const Agent* principal = a.principal ? &agents_[*a.principal] : nullptr;
    if (principal != nullptr && principal->account() == author) {
        bias = mag;
        biased = true;
    } else if (a.archetype == Archetype::kColluder && a.works()) {
        if (worker.archetype == Archetype::kColluder && worker.works()) {
            bias = mag;
            biased = true;
        } else if (worker.target) {
            bias = -mag;
            biased = true;
        }
    } else if (a.archetype == Archetype::kBadMouther && worker.target) {
        bias = -mag;
        biased = true;
    } else if (a.archetype == Archetype::kReciprocator && a.grudges.contains(author)) {
        bias = -mag;
        biased = true;
    }
    std::uint32_t c = 0;
    std::uint32_t qq = 0;
    if (biased) {
        c = clamp_score(q + bias);
        qq = clamp_score(q + bias);
    } else {
        c = clamp_score(q + a.rng.between(-noise, noise));
        qq = clamp_score(q + a.rng.between(-noise, noise));
    }
    call(a, op::SubmitEvaluation{sub, c, qq, derive("review", sub, a.index)});
}

void Simulation::manage_job(Agent& a) {
    const AccountId me = a.account();
    if (!a.job) {
        // Accept an offer naming us, if one is live.
        for (const auto& ag : state().agreements.all()) {
            if (ag.worker != me || ag.state != AgreementState::kCreated || now_ > ag.acceptance_deadline) continue;
            // The state is replaced on every call, so copy before submitting.
            const AgreementId id = ag.id;
            const Wei fee = ag.acceptance_fee;
            if (call(a, op::AcceptAgreement{id, fee})) {
                a.outflow += fee;
                a.job = id;
                a.accepted_at = now_;
                a.applied.reset();
            }
            break;
        }
        return;
    }
    const Agreement& ag = state().agreements.get(*a.job);
    if (ag.state != AgreementState::kAccepted) {
        a.job.reset();
        return;
    }
    if (ag.committed || now_ < a.accepted_at + config_.windows.work) return;
    std::ostringstream work;
    work << "task=" << ag.task_id << ";worker=" << me.hex() << ";quality=" << a.quality
         << ";nonce=" << a.rng.below(1'000'000'000);
    std::string plaintext = work.str();
    if (!call(a, op::Commit{ag.id, commitment_of(as_bytes(plaintext))})) return;
    SubmissionId sub = state().submissions.all().back().id;
    a.submissions.push_back(sub);
    a.plaintexts[sub] = plaintext;
    a.job.reset();
    open_subs_.insert(sub);
    request_evaluators(a, sub);
}

void Simulation::request_evaluators(Agent& a, SubmissionId sub) {
    std::size_t before = state().evaluations.get(sub).rounds.size();
    if (!call(a, op::AssignEvaluators{sub})) return;
    const EvaluationRecord& rec = state().evaluations.get(sub);
    if (rec.rounds.size() > before) {
        observe_round(sub, rec.rounds.back());
        try {
            absorb(platform_.reveal(a.key, sub, as_bytes(a.plaintexts.at(sub))));
        } catch (const ProtocolError& e) {
            ++report_.rejected_calls;
            ++report_.rejected_by_reason["reveal:" + std::string(error_name(e.code()))];
        }
    }
}

void Simulation::follow_up(Agent& a) {
    for (SubmissionId sub : a.submissions) {
        if (!open_subs_.contains(sub)) continue;
        const EvaluationRecord& rec = state().evaluations.get(sub);
        if (rec.finalized()) continue;
        if (rec.rounds.empty() || rec.awaiting_reassignment()) {
            request_evaluators(a, sub);
        } else if (!state().submissions.get(sub).revealed) {
            try {
                absorb(platform_.reveal(a.key, sub, as_bytes(a.plaintexts.at(sub))));
            } catch (const ProtocolError& e) {
                ++report_.rejected_calls;
                ++report_.rejected_by_reason["reveal:" + std::string(error_name(e.code()))];
            }
        }
    }
}

void Simulation::seek_work(Agent& a) {
    if (a.job) return;
    if (a.applied) {
        const Task& t = state().market.get(*a.applied);
        if (t.status == TaskStatus::kOpen) return;
        a.applied.reset();
    }
    TaskFilter filter;
    filter.skills = std::set<std::string>(a.skills.begin(), a.skills.end());
    filter.status = TaskStatus::kOpen;
    std::vector<Task> open = platform_.search(filter);
    if (open.empty()) return;
    const Task& pick = open[a.rng.below(open.size())];
    if (call(a, op::Apply{pick.id})) a.applied = pick.id;
}

void Simulation::maybe_enroll(Agent& a) {
    const AccountId me = a.account();
    if (state().evaluations.enrolled(me)) return;
    const UserAccount& acc = state().accounts.get(me);
    bool qualifies = state().params.volunteer_threshold == VolunteerThreshold::kNone ||
                     acc.reputation >= state().accounts.stats().avg_worker_reputation;
    if (qualifies) call(a, op::BecomeEvaluator{});
}

void Simulation::maybe_reenter(Agent& a) {
    const AccountId me = a.account();
    const UserAccount& acc = state().accounts.get(me);
    PlatformStats stats = state().accounts.stats();
    Fixed trigger = Fixed::from_raw(floor_div(static_cast<Int128>(stats.avg_worker_reputation.raw()) *
                                                  config_.adversary.reentry_fraction.raw(),
                                              Fixed::kScale));
    // A fresh identity has to have worked before it is worth shedding.
    if (acc.reputation >= trigger || a.job || a.applied || a.submissions.empty()) return;
    if (!open_obligations(state(), me).empty()) return;
    Wei deposit = acc.deposit;
    Fixed rep = acc.reputation;
    Receipt r;
    try {
        r = platform_.submit(a.key, op::Exit{});
    } catch (const ProtocolError& e) {
        ++report_.rejected_calls;
        ++report_.rejected_by_reason["exit:" + std::string(error_name(e.code()))];
        return;
    }
    absorb(r);
    a.outflow -= r.refunded;
    ++report_.reentry.exits;
    report_.reentry.deposits_at_exit += deposit;
    report_.reentry.refunded += r.refunded;
    report_.reentry.exits_at.emplace_back(rep, stats.avg_worker_reputation);
    // A fresh identity with a clean slate.
    ++a.generation;
    a.key = KeyPair::from_seed(derive("agent", a.index, a.generation));
    a.submissions.clear();
    a.plaintexts.clear();
    a.registered = false;
    register_agent(a);
}

void Simulation::maybe_spawn(Agent& a) {
    const Wei fee = state().params.registration_fee;
    if (now_ < a.next_spawn || a.spawned >= config_.adversary.sybil_cap || a.sybil_budget < fee) return;
    const std::uint32_t self = a.index;
    a.next_spawn += config_.adversary.sybil_interval;
    // add_agent may reallocate, so the principal is re-fetched by index.
    Agent& helper = add_agent(AgentKind::kHelper, agents_[self].group + "-sybil", Archetype::kSybilSpawner);
    helper.principal = self;
    helper.skills = agents_[self].skills;
    if (!register_agent(helper)) return;
    agents_[self].sybil_budget -= fee;
    ++agents_[self].spawned;
    ++report_.sybil_identities;
}

void Simulation::observe_round(SubmissionId sub, const EvaluationRound& round) {
    const std::uint32_t x = static_cast<std::uint32_t>(round.selected.size());
    const std::size_t n = round.eligible.size();
    auto slot_size_of = [&](const AccountId& id) -> std::size_t {
        for (const auto& slot : round.slots) {
            if (std::find(slot.begin(), slot.end(), id) != slot.end()) return slot.size();
        }
        return 0;
    };
    auto draw_probability = [&](const AccountId& id) -> double {
        if (!round.slots.empty()) {
            std::size_t size = slot_size_of(id);
            return size == 0 ? 0.0 : 1.0 / static_cast<double>(size);
        }
        return static_cast<double>(x) / static_cast<double>(n);
    };
    auto eligible = [&](const AccountId& id) {
        return std::any_of(round.eligible.begin(), round.eligible.end(), [&](const Candidate& c) { return c.id == id; });
    };

    std::set<AccountId> colluders = accounts_of(Archetype::kColluder);
    if (!colluders.empty()) {
        double p = 0.0;
        if (!round.slots.empty()) {
            std::vector<double> per_slot;
            for (const auto& slot : round.slots) {
                std::size_t m = std::count_if(slot.begin(), slot.end(), [&](const auto& id) { return colluders.contains(id); });
                per_slot.push_back(static_cast<double>(m) / static_cast<double>(slot.size()));
            }
            p = prob_two_or_more(per_slot);
        } else {
            std::size_t m = std::count_if(round.eligible.begin(), round.eligible.end(),
                                          [&](const Candidate& c) { return colluders.contains(c.id); });
            double total = choose(n, x);
            p = 1.0 - (choose(n - m, x) + static_cast<double>(m) * choose(n - m, x - 1)) / total;
            p = std::max(0.0, p);
        }
        std::size_t drawn = std::count_if(round.selected.begin(), round.selected.end(),
                                          [&](const AccountId& id) { return colluders.contains(id); });
        ++report_.collusion.rounds;
        report_.collusion.expected += p;
        report_.collusion.variance += p * (1 - p);
        if (drawn >= 2) ++report_.collusion.co_assigned;
    }

    const AccountId author = state().submissions.get(sub).worker;
    for (const auto& a : agents_) {
        if (!a.registered || !a.works() || a.archetype != Archetype::kReciprocator) continue;
        if (!a.grudges.contains(author) || !eligible(a.account())) continue;
        double p = draw_probability(a.account());
        ++report_.reciprocity.opportunities;
        report_.reciprocity.expected += p;
        report_.reciprocity.variance += p * (1 - p);
        if (round.is_selected(a.account())) ++report_.reciprocity.hits;
    }
}

void Simulation::settle_finished() {
    std::vector<SubmissionId> done;
    for (SubmissionId sub : open_subs_) {
        if (state().evaluations.get(sub).finalized()) done.push_back(sub);
    }
    for (SubmissionId sub : done) {
        open_subs_.erase(sub);
        const EvaluationRecord& rec = state().evaluations.get(sub);
        Agent& author = owner(rec.worker);
        if (author.archetype != Archetype::kReciprocator || !author.works()) continue;
        // Anyone who scored this worker well below the outcome is remembered.
        const Fixed final = rec.outcome->final_score;
        for (const auto& round : rec.rounds) {
            for (const auto& s : round.scores) {
                Int128 avg2 = static_cast<Int128>(s.completeness + s.quality) * Fixed::kScale;  // 2 * mean score
                Int128 bar = 2 * (static_cast<Int128>(final.raw()) -
                                  static_cast<Int128>(config_.adversary.grudge_margin) * Fixed::kScale);
                if (avg2 < bar) author.grudges.insert(s.evaluator);
            }
        }
    }
}

Wei Simulation::residual() const {
    Wei out = 0;
    for (const auto& a : agents_) out += a.outflow;
    const PlatformState& s = state();
    return out - s.accounts.deposits_held() - s.accounts.platform_pool() - s.agreements.held();
}

void Simulation::record_metrics(Tick t) {
    TickMetrics m;
    m.tick = t;
    m.ledger_entries = platform_.ledger().size();
    for (const auto& task : state().market.all()) {
        ++m.tasks_posted;
        if (task.status == TaskStatus::kEvaluated) ++m.tasks_evaluated;
        if (task.status == TaskStatus::kCancelled) ++m.tasks_cancelled;
    }
    double honest = 0;
    double adversary = 0;
    std::size_t nh = 0;
    std::size_t na = 0;
    for (const auto& a : agents_) {
        if (!a.registered || !a.works()) continue;
        const UserAccount& acc = state().accounts.get(a.account());
        if (!acc.active()) continue;
        if (is_adversary(a)) {
            adversary += acc.reputation.to_double();
            ++na;
        } else {
            honest += acc.reputation.to_double();
            ++nh;
        }
    }
    m.mean_honest_reputation = nh ? honest / static_cast<double>(nh) : 0.0;
    m.mean_adversary_reputation = na ? adversary / static_cast<double>(na) : 0.0;
    m.consensus_failures = state().evaluations.consensus_failures;
    m.forced_rounds = state().evaluations.forced_rounds;
    for (const auto& e : platform_.ledger().entries()) m.gas += e.gas_charged;
    m.conservation_residual = residual();
    report_.metrics.push_back(m);

    for (const auto& [id, acc] : state().accounts.all()) {
        if (!acc.is_worker()) continue;
        auto it = last_rep_.find(id);
        if (it == last_rep_.end() || it->second != acc.reputation) {
            last_rep_[id] = acc.reputation;
            report_.trajectories[id.hex()].emplace_back(t, acc.reputation);
        }
    }
}

bool Simulation::finished() const {
    if (regular_posted_ < config_.tasks.count || starter_posted_ < config_.tasks.starter_count) return false;
    for (const auto& task : state().market.all()) {
        if (task.status != TaskStatus::kEvaluated && task.status != TaskStatus::kCancelled) return false;
    }
    return open_subs_.empty();
}

void Simulation::deadlock(Tick t) const {
    std::ostringstream msg;
    std::size_t open = 0;
    for (const auto& task : state().market.all()) {
        if (task.status != TaskStatus::kEvaluated && task.status != TaskStatus::kCancelled) ++open;
    }
    msg << "no progress for " << config_.stall_ticks << " ticks at tick " << t << ": " << open
        << " unfinished tasks, " << open_subs_.size() << " submissions awaiting evaluation";
    for (SubmissionId sub : open_subs_) {
        msg << "; submission " << sub << " has " << eligible_evaluators(state(), sub).size()
            << " eligible evaluators, needs " << state().params.evaluators_per_submission;
        break;
    }
    fail(ErrorCode::kDeadlock, msg.str());
}

void Simulation::finish(RunResult& out) {
    RunReport& r = report_;
    r.seed = config_.seed;
    r.consensus_failures = state().evaluations.consensus_failures;
    r.forced_rounds = state().evaluations.forced_rounds;
    r.conservation_residual = residual();

    double honest = 0;
    double adversary = 0;
    std::size_t nh = 0;
    std::size_t na = 0;
    for (const auto& a : agents_) {
        if (a.kind == AgentKind::kPoster) continue;
        AgentSummary s;
        s.account = a.account().hex();
        s.group = a.group;
        s.archetype = a.archetype;
        s.target = a.target;
        s.true_quality = a.quality;
        s.generation = a.generation;
        s.joined_at = a.join_at;
        s.submissions = static_cast<std::uint32_t>(a.submissions.size());
        if (a.registered) {
            const UserAccount& acc = state().accounts.get(a.account());
            s.active = acc.active();
            s.reputation = acc.reputation;
            if (a.works() && acc.active()) {
                if (is_adversary(a)) {
                    adversary += acc.reputation.to_double();
                    ++na;
                } else {
                    honest += acc.reputation.to_double();
                    ++nh;
                }
            }
        } else {
            s.active = false;
        }
        r.agents.push_back(std::move(s));
    }
    if (na > 0 && nh > 0) r.adversary_advantage = adversary / na - honest / nh;

    double target_sum = 0;
    std::size_t target_n = 0;
    for (const auto& task : state().market.all()) {
        TaskOutcome o;
        o.task_id = task.id;
        o.status = std::string(task_status_name(task.status));
        o.starter = starter_tasks_.contains(task.id);
        o.reward = task.reward;
        for (const auto& ag : state().agreements.all()) {
            if (ag.task_id != task.id) continue;
            o.worker = ag.worker.hex();
            if (ag.settlement) o.reward_paid = ag.settlement->reward_paid;
            if (const Submission* sub = state().submissions.find_by_agreement(ag.id)) {
                const EvaluationRecord& rec = state().evaluations.get(sub->id);
                if (rec.outcome) {
                    o.final_score = rec.outcome->final_score;
                    auto who = by_account_.find(ag.worker);
                    if (who != by_account_.end() && agents_[who->second].target) {
                        target_sum += rec.outcome->final_score.to_double();
                        ++target_n;
                    }
                }
            }
        }
        r.tasks.push_back(std::move(o));
    }
    if (target_n > 0) r.target_mean_final_score = target_sum / static_cast<double>(target_n);

    auto trace = platform_.ledger().entries();
    for (const auto& e : trace) r.total_gas += e.gas_charged;
    r.total_usd = cost_usd(r.total_gas, config_.gas_price_gwei, config_.ether_usd);
    r.chain_ok = verify_chain(trace).ok;
    r.state_root = platform_.state_root();

    out.trace.assign(trace.begin(), trace.end());
    out.store_manifest = store_manifest_json(state());
    out.store = platform_.store();
    out.report = std::move(report_);
}

RunResult Simulation::run() {
    bootstrap();
    Tick stalled = 0;
    Tick t = 1;
    for (; t <= config_.duration; ++t) {
        now_ = t;
        std::size_t before = platform_.ledger().size();
        Receipt tick = platform_.submit(operator_key_, op::AdvanceTime{t});
        absorb(tick);
        bool progress = !tick.events.empty();
        join_late(t);
        post_tasks(t);

        std::vector<std::pair<AccountId, std::uint32_t>> order;
        for (const auto& a : agents_) {
            if (a.registered) order.emplace_back(a.account(), a.index);
        }
        std::sort(order.begin(), order.end());
        for (const auto& [id, index] : order) {
            // Identities retired earlier in this tick are skipped.
            if (agents_[index].account() != id) continue;
            act(agents_[index]);
        }
        settle_finished();
        progress = progress || platform_.ledger().size() > before + 1;
        record_metrics(t);
        if (finished()) break;
        stalled = progress ? 0 : stalled + 1;
        if (stalled >= config_.stall_ticks) deadlock(t);
    }
    report_.ticks_run = std::min(t, config_.duration);
    RunResult out;
    finish(out);
    return out;
}

}  // namespace

RunResult run(const ScenarioConfig& config) {
    config.validate();
    Simulation sim(config);
    return sim.run();
}

std::string_view feature_name(Feature f) noexcept {
    switch (f) {
        case Feature::kOutlierRemoval: return "outlier-removal";
        case Feature::kSlotSelection: return "slot-selection";
        case Feature::kEntryFee: return "entry-fee";
    }
    return "unknown";
}

Feature parse_feature(std::string_view name) {
    for (Feature f : {Feature::kOutlierRemoval, Feature::kSlotSelection, Feature::kEntryFee}) {
        if (feature_name(f) == name) return f;
    }
    fail(ErrorCode::kConfigInvalid, "unknown feature " + std::string(name));
}

ScenarioConfig with_feature(ScenarioConfig config, Feature feature, bool enabled) {
    ProtocolParams defaults;
    switch (feature) {
        case Feature::kOutlierRemoval:
            if (!enabled) {
                config.params.outlier_k.reset();
            } else if (!config.params.outlier_k) {
                config.params.outlier_k = defaults.outlier_k;
            }
            break;
        case Feature::kSlotSelection: config.params.slot_selection = enabled; break;
        case Feature::kEntryFee:
            if (!enabled) {
                config.params.registration_fee = 0;
            } else if (config.params.registration_fee == 0) {
                config.params.registration_fee = defaults.registration_fee;
            }
            break;
    }
    return config;
}

AblationPair ablate(const ScenarioConfig& config, Feature feature) {
    AblationPair pair;
    pair.feature = feature;
    pair.with = run(with_feature(config, feature, true)).report;
    pair.without = run(with_feature(config, feature, false)).report;
    return pair;
}

ReciprocityStats reciprocity_exposure(const ScenarioConfig& config) { return run(config).report.reciprocity; }

}  // namespace workerrep::sim
