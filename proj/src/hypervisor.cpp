// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "socsim/hypervisor.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace socsim::sched {

Step Step::burst(std::string label, std::uint64_t cycles) {
    Step s;
    s.kind = Kind::burst;
    s.label = std::move(label);
    s.cycles = cycles;
    return s;
}

Step Step::acquire(std::string label) {
    Step s;
    s.kind = Kind::acquire_gpu;
    s.label = std::move(label);
    return s;
}

Step Step::launch(std::string label, std::uint64_t device_cycles) {
    Step s;
    s.kind = Kind::launch_kernel;
    s.label = std::move(label);
    s.device_cycles = device_cycles;
    return s;
}

Step Step::release(std::string label) {
    Step s;
    s.kind = Kind::release_gpu;
    s.label = std::move(label);
    return s;
}

bool Port::send(std::vector<std::uint8_t> bytes, const std::string& sender, Tick visible_from) {
    if (fifo_.size() >= capacity_) return false;
    fifo_.push_back(Message{std::move(bytes), sender, visible_from});
    return true;
}

std::optional<Port::Message> Port::receive(Tick now) {
    if (fifo_.empty() || fifo_.front().visible_from > now) return std::nullopt;
    Message m = std::move(fifo_.front());
    fifo_.pop_front();
    return m;
}

Tick Port::next_visible() const {
    if (fifo_.empty()) return kNever;
    return fifo_.front().visible_from;
}

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::window_start: return "window_start";
        case EventKind::window_end: return "window_end";
        case EventKind::step_exec: return "step_exec";
        case EventKind::msg_send: return "msg_send";
        case EventKind::msg_recv: return "msg_recv";
        case EventKind::gpu_busy: return "gpu_busy";
        case EventKind::grant: return "grant";
        case EventKind::release: return "release";
        case EventKind::block: return "block";
    }
    return "?";
}

std::string format_event(const TraceEvent& e) {
    std::ostringstream os;
    os << "tick=" << e.tick << " core=" << e.core << " part=" << e.partition
       << " kind=" << event_kind_name(e.kind) << " detail=" << e.detail;
    return os.str();
}

std::vector<std::string> validate_schedule(const Schedule& schedule,
                                           const std::vector<PartitionDesc>& partitions) {
    std::vector<std::string> violations;
    auto add = [&](const std::string& v) { violations.push_back(v); };

    if (schedule.major_frame < 1) add("major_frame must be >= 1");

    std::map<std::string, const PartitionDesc*> by_id;
    for (const auto& p : partitions) {
        if (p.id.empty()) add("partition with empty id");
        if (!by_id.emplace(p.id, &p).second) add("duplicate partition id '" + p.id + "'");
    }

    std::map<int, std::vector<const Window*>> per_core;
    for (const auto& w : schedule.windows) {
        if (w.duration < 1) {
            add("window for '" + w.partition + "' on core " + std::to_string(w.core) +
                " has zero duration");
        }
        if (w.start + w.duration > schedule.major_frame) {
            add("window for '" + w.partition + "' on core " + std::to_string(w.core) + " [" +
                std::to_string(w.start) + "," + std::to_string(w.start + w.duration) +
                ") exceeds major frame " + std::to_string(schedule.major_frame));
        }
        if (!by_id.count(w.partition)) {
            add("window references unknown partition '" + w.partition + "'");
        }
        per_core[w.core].push_back(&w);
    }
    for (auto& [core, ws] : per_core) {
        std::sort(ws.begin(), ws.end(),
                  [](const Window* a, const Window* b) { return a->start < b->start; });
        for (size_t i = 1; i < ws.size(); ++i) {
            const Window* a = ws[i - 1];
            const Window* b = ws[i];
            if (a->start + a->duration > b->start) {
                add("core " + std::to_string(core) + ": windows overlap: '" + a->partition +
                    "' [" + std::to_string(a->start) + "," +
                    std::to_string(a->start + a->duration) + ") and '" + b->partition + "' [" +
                    std::to_string(b->start) + "," + std::to_string(b->start + b->duration) + ")");
            }
        }
    }

    bool any_gpu = false;
    int managers = 0;
    for (const auto& p : partitions) {
        if (p.kind == PartitionKind::gpu_manager) ++managers;
        for (const auto& s : p.program) {
            if (s.kind != Step::Kind::burst) any_gpu = true;
        }
    }
    if (any_gpu && managers != 1) {
        add("programs use the gpu but the scenario has " + std::to_string(managers) +
            " gpu_manager partitions (need exactly 1)");
    } else if (managers > 1) {
        add("more than one gpu_manager partition");
    }
    return violations;
}

namespace {

struct Occurrence {
    Tick start = kNever;
    Tick end = kNever;
    const Window* window = nullptr;
    bool active() const { return window != nullptr; }
};

struct CoreRt {
    int core = 0;
    std::vector<Window> windows;  // sorted by start
    Occurrence cur;               // currently reported occurrence (for boundary events)
};

struct PartRt {
    const PartitionDesc* desc = nullptr;
    std::uint16_t index = 0;
    size_t step = 0;
    std::uint64_t burst_done = 0;
    bool waiting = false;  // acquire/launch second phase
    Tick kernel_done = 0;
    Tick ready_at = 0;
    arbiter::ClientState client;
    PartitionStats stats;
    bool blocking = false;
    Tick block_start = 0;
    std::string block_reason;

    bool done() const { return step >= desc->program.size(); }
};

Occurrence occurrence_at(const CoreRt& core, Tick t, Tick frame) {
    if (core.windows.empty()) return {};
    Tick base = (t / frame) * frame;
    Tick off = t - base;
    for (const auto& w : core.windows) {
        if (off >= w.start && off < w.start + w.duration) {
            return Occurrence{base + w.start, base + w.start + w.duration, &w};
        }
    }
    return {};
}

Tick next_window_start(const CoreRt& core, Tick t, Tick frame) {
    if (core.windows.empty()) return kNever;
    Tick base = (t / frame) * frame;
    Tick off = t - base;
    for (const auto& w : core.windows) {
        if (w.start > off) return base + w.start;
    }
    return base + frame + core.windows.front().start;
}

class Engine {
public:
    Engine(const Schedule& schedule, const std::vector<PartitionDesc>& partitions, Tick until,
           bool trace_enabled)
        : schedule_(schedule), until_(until), trace_enabled_(trace_enabled) {
        auto violations = validate_schedule(schedule, partitions);
        if (!violations.empty()) {
            std::string msg = "invalid schedule:";
            for (const auto& v : violations) msg += "\n  " + v;
            throw std::invalid_argument(msg);
        }
        for (std::uint16_t i = 0; i < partitions.size(); ++i) {
            PartRt rt;
            rt.desc = &partitions[i];
            rt.index = i;
            rt.client.partition = partitions[i].id;
            parts_.emplace(partitions[i].id, std::move(rt));
            index_to_id_.push_back(partitions[i].id);
            if (partitions[i].kind == PartitionKind::gpu_manager) manager_id_ = partitions[i].id;
        }
        std::map<int, CoreRt> cores;
        for (const auto& w : schedule.windows) {
            auto& c = cores[w.core];
            c.core = w.core;
            c.windows.push_back(w);
        }
        for (auto& [id, c] : cores) {
            std::sort(c.windows.begin(), c.windows.end(),
                      [](const Window& a, const Window& b) { return a.start < b.start; });
            cores_.push_back(std::move(c));
        }
        std::size_t inbox_cap = std::max<std::size_t>(2 * partitions.size(), 4);
        ports_.emplace(kInbox, Port(kInbox, inbox_cap));
        for (const auto& p : partitions) {
            if (p.kind == PartitionKind::workload) {
                std::string g = grant_port(p.id);
                ports_.emplace(g, Port(g, 2));
            }
        }
    }

    EngineResult run() {
        Tick t = 0;
        while (t < until_) {
            emit_boundaries(t);
            process_instantaneous(t);
            if (all_workloads_done()) {
                end_tick_ = t;
                return finish();
            }
            Tick next = next_event(t);
            if (next == t) continue;  // more same-tick work appeared
            if (next == kNever || next > until_) next = until_;
            advance(t, next);
            t = next;
        }
        end_tick_ = until_;
        return finish();
    }

private:
    static constexpr const char* kInbox = "mgr.inbox";
    static std::string grant_port(const std::string& id) { return "grant." + id; }

    void emit(Tick tick, int core, EventKind kind, const std::string& part,
              std::string detail) {
        if (!trace_enabled_) return;
        trace_.push_back(TraceEvent{tick, core, kind, part, std::move(detail)});
    }

    Port& port(const std::string& name) {
        auto it = ports_.find(name);
        if (it == ports_.end()) {
            throw std::runtime_error("program step references missing port '" + name + "'");
        }
        return it->second;
    }

    void post(const std::string& port_name, arbiter::MsgKind kind, std::uint16_t index,
              const std::string& sender, Tick t) {
        if (!port(port_name).send(arbiter::encode_msg(kind, index), sender, t + 1)) {
            throw std::runtime_error("port '" + port_name + "' overflowed");
        }
    }

    bool all_workloads_done() const {
        for (const auto& [id, p] : parts_) {
            if (p.desc->kind == PartitionKind::workload && !p.done()) return false;
        }
        return true;
    }

    void open_block(PartRt& p, Tick t, const std::string& reason) {
        if (!p.blocking) {
            p.blocking = true;
            p.block_start = t;
            p.block_reason = reason;
        }
    }

    void close_block(PartRt& p, Tick t, int core) {
        if (p.blocking) {
            emit(p.block_start, core, EventKind::block, p.desc->id,
                 p.block_reason + " for " + std::to_string(t - p.block_start + 1) + " ticks");
            p.blocking = false;
        }
    }

    void complete_step(PartRt& p, Tick completion, int core, bool emit_exec) {
        const Step& s = p.desc->program[p.step];
        p.stats.completed_step_cycles += s.cost();
        if (emit_exec) {
            emit(completion == 0 ? 0 : completion - 1, core, EventKind::step_exec, p.desc->id,
                 s.label + " cost=" + std::to_string(s.cost()));
        }
        ++p.step;
        p.burst_done = 0;
        p.waiting = false;
        if (p.done()) {
            p.stats.completed = true;
            p.stats.completion_tick = completion;
        }
    }

    // Emit window_start/window_end transitions for every core at tick t.
    void emit_boundaries(Tick t) {
        for (auto& c : cores_) {
            Occurrence occ = occurrence_at(c, t, schedule_.major_frame);
            if (c.cur.active() && (!occ.active() || occ.start != c.cur.start) &&
                c.cur.end <= t) {
                emit(c.cur.end, c.core, EventKind::window_end, c.cur.window->partition, "");
                // leaving a window interrupts any open block span
                auto it = parts_.find(c.cur.window->partition);
                if (it != parts_.end()) close_block(it->second, c.cur.end - 1, c.core);
                c.cur = {};
            }
            if (occ.active() && occ.start != c.cur.start) {
                c.cur = occ;
                if (occ.start == t) {
                    emit(t, c.core, EventKind::window_start, occ.window->partition,
                         "cs=" + std::to_string(schedule_.context_switch_cycles));
                }
            }
        }
    }

    // Handle every zero-duration action whose time has come.
    void process_instantaneous(Tick t) {
        for (auto& c : cores_) {
            Occurrence occ = occurrence_at(c, t, schedule_.major_frame);
            if (!occ.active()) continue;
            Tick cs_end = std::min(occ.start + schedule_.context_switch_cycles, occ.end);
            if (t < cs_end) continue;
            auto pit = parts_.find(occ.window->partition);
            if (pit == parts_.end()) continue;
            PartRt& p = pit->second;
            if (p.ready_at > t) continue;

            if (p.desc->kind == PartitionKind::gpu_manager) {
                manager_tick(p, c.core, t);
                continue;
            }
            if (p.done()) continue;
            workload_tick(p, c.core, t);
        }
    }

    void manager_tick(PartRt& p, int core, Tick t) {
        auto msg = port(kInbox).receive(t);
        if (!msg) return;
        auto [kind, index] = arbiter::decode_msg(msg->bytes);
        const std::string& sender = index_to_id_.at(index);
        emit(t, core, EventKind::msg_recv, p.desc->id,
             std::string(kind == arbiter::MsgKind::request ? "request" : "release") + " from " +
                 sender);
        auto [next_state, outgoing] =
            arbiter::manager_handle(mgr_state_, arbiter::ProtocolMsg{kind, sender});
        mgr_state_ = std::move(next_state);
        if (kind == arbiter::MsgKind::release) {
            emit(t, core, EventKind::release, sender, "device released");
        }
        for (const auto& out : outgoing) {
            auto grantee = parts_.find(out.partition);
            post(grant_port(out.partition), arbiter::MsgKind::grant, grantee->second.index,
                 p.desc->id, t);
            emit(t, core, EventKind::grant, out.partition, "device granted");
        }
        p.stats.executed_cycles += 1;
        p.ready_at = t + 1;
    }

    void workload_tick(PartRt& p, int core, Tick t) {
        const Step& s = p.desc->program[p.step];
        switch (s.kind) {
            case Step::Kind::burst:
                if (s.cycles == p.burst_done) {
                    // covers zero-cost bursts and bursts finished by advance()
                    complete_step(p, t, core, true);
                }
                return;
            case Step::Kind::acquire_gpu:
                if (!p.waiting) {
                    auto [cs, out] = arbiter::client_step(p.client, arbiter::ClientEvent::want_gpu);
                    p.client = std::move(cs);
                    post(kInbox, out.front().kind, p.index, p.desc->id, t);
                    emit(t, core, EventKind::msg_send, p.desc->id, "request -> mgr.inbox");
                    p.stats.executed_cycles += 1;
                    p.waiting = true;
                    p.ready_at = t + 1;
                    return;
                }
                if (auto g = port(grant_port(p.desc->id)).receive(t)) {
                    p.client =
                        arbiter::client_step(p.client, arbiter::ClientEvent::grant_received).first;
                    emit(t, core, EventKind::msg_recv, p.desc->id, "grant received");
                    p.stats.blocked_cycles += 1;
                    close_block(p, t, core);
                    complete_step(p, t + 1, core, true);
                    p.ready_at = t + 1;
                } else {
                    open_block(p, t, "waiting for grant");
                }
                return;
            case Step::Kind::launch_kernel:
                if (!p.waiting) {
                    if (p.client.phase != arbiter::ClientPhase::held) {
                        throw std::logic_error("kernel launch without holding the device ('" +
                                               p.desc->id + "')");
                    }
                    if (t < device_busy_until_) {
                        throw std::logic_error("device busy at launch ('" + p.desc->id + "')");
                    }
                    p.kernel_done = t + 1 + s.device_cycles;
                    device_busy_until_ = p.kernel_done;
                    emit(t, core, EventKind::gpu_busy, p.desc->id,
                         s.label + " device_cycles=" + std::to_string(s.device_cycles));
                    p.stats.executed_cycles += 1;
                    p.waiting = true;
                    p.ready_at = t + 1;
                    return;
                }
                if (t >= p.kernel_done) {
                    p.stats.blocked_cycles += 1;
                    close_block(p, t, core);
                    complete_step(p, t + 1, core, true);
                    p.ready_at = t + 1;
                } else {
                    open_block(p, t, "waiting for kernel " + s.label);
                }
                return;
            case Step::Kind::release_gpu: {
                auto [cs, out] = arbiter::client_step(p.client, arbiter::ClientEvent::done);
                p.client = std::move(cs);
                post(kInbox, out.front().kind, p.index, p.desc->id, t);
                emit(t, core, EventKind::msg_send, p.desc->id, "release -> mgr.inbox");
                p.stats.executed_cycles += 1;
                complete_step(p, t + 1, core, true);
                p.ready_at = t + 1;
                return;
            }
        }
    }

    // Earliest tick > t (or == t for pending same-tick work) where any
    // core's state can change.
    Tick next_event(Tick t) {
        Tick best = kNever;
        for (auto& c : cores_) {
            best = std::min(best, core_next_event(c, t));
        }
        return best;
    }

    Tick core_next_event(CoreRt& c, Tick t) {
        Occurrence occ = occurrence_at(c, t, schedule_.major_frame);
        if (!occ.active()) return next_window_start(c, t, schedule_.major_frame);
        Tick cs_end = std::min(occ.start + schedule_.context_switch_cycles, occ.end);
        if (t < cs_end) return cs_end;
        auto pit = parts_.find(occ.window->partition);
        if (pit == parts_.end()) return occ.end;
        PartRt& p = pit->second;
        if (p.done() && p.desc->kind == PartitionKind::workload) return occ.end;
        if (p.ready_at > t) return std::min(p.ready_at, occ.end);

        if (p.desc->kind == PartitionKind::gpu_manager) {
            Tick nv = port(kInbox).next_visible();
            if (nv <= t) return t;
            return std::min(nv, occ.end);
        }
        const Step& s = p.desc->program[p.step];
        switch (s.kind) {
            case Step::Kind::burst: {
                if (p.burst_done == s.cycles) return t;  // completion pending
                Tick done_at = t + (s.cycles - p.burst_done);
                return std::min(done_at, occ.end);
            }
            case Step::Kind::acquire_gpu: {
                if (!p.waiting) return t;
                Tick nv = port(grant_port(p.desc->id)).next_visible();
                if (nv <= t) return t;
                return std::min(nv, occ.end);
            }
            case Step::Kind::launch_kernel:
                if (!p.waiting) return t;
                if (p.kernel_done <= t) return t;
                return std::min(p.kernel_done, occ.end);
            case Step::Kind::release_gpu:
                return t;
        }
        return occ.end;
    }

    // Account the half-open span [t, next) for every core. No state
    // change happens strictly inside the span by construction.
    void advance(Tick t, Tick next) {
        std::uint64_t delta = next - t;
        for (auto& c : cores_) {
            Occurrence occ = occurrence_at(c, t, schedule_.major_frame);
            if (!occ.active()) continue;
            Tick cs_end = std::min(occ.start + schedule_.context_switch_cycles, occ.end);
            if (t < cs_end) continue;
            auto pit = parts_.find(occ.window->partition);
            if (pit == parts_.end()) continue;
            PartRt& p = pit->second;
            if (p.ready_at > t || p.done()) continue;
            if (p.desc->kind == PartitionKind::gpu_manager) continue;
            const Step& s = p.desc->program[p.step];
            if (s.kind == Step::Kind::burst && p.burst_done < s.cycles) {
                p.burst_done += delta;
                p.stats.executed_cycles += delta;
            } else if ((s.kind == Step::Kind::acquire_gpu ||
                        s.kind == Step::Kind::launch_kernel) &&
                       p.waiting) {
                p.stats.blocked_cycles += delta;
                open_block(p, t, s.kind == Step::Kind::acquire_gpu
                                     ? "waiting for grant"
                                     : "waiting for kernel " + s.label);
            }
        }
    }

    EngineResult finish() {
        EngineResult r;
        std::stable_sort(trace_.begin(), trace_.end(),
                         [](const TraceEvent& a, const TraceEvent& b) { return a.tick < b.tick; });
        r.trace = std::move(trace_);
        for (auto& [id, p] : parts_) {
            if (!p.done()) {
                const auto& prog = p.desc->program;
                if (p.step < prog.size() && prog[p.step].kind == Step::Kind::burst) {
                    p.stats.partial_step_cycles = p.burst_done;
                } else if (p.step < prog.size() && p.waiting) {
                    p.stats.partial_step_cycles = 1;  // the consumed send/launch tick
                }
            }
            r.partitions.emplace(id, p.stats);
        }
        r.end_tick = end_tick_;
        return r;
    }

    const Schedule& schedule_;
    Tick until_;
    bool trace_enabled_;
    std::vector<CoreRt> cores_;
    std::map<std::string, PartRt> parts_;
    std::vector<std::string> index_to_id_;
    std::map<std::string, Port> ports_;
    arbiter::ManagerState mgr_state_;
    std::string manager_id_;
    Tick device_busy_until_ = 0;
    std::vector<TraceEvent> trace_;
    Tick end_tick_ = 0;
};

}  // namespace

EngineResult run(const Schedule& schedule, const std::vector<PartitionDesc>& partitions,
                 Tick until, bool trace_enabled) {
    Engine engine(schedule, partitions, until, trace_enabled);
    return engine.run();
}

}  // namespace socsim::sched
