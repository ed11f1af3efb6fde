// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "socsim/arbiter.hpp"

namespace socsim::sched {

using Tick = std::uint64_t;

inline constexpr Tick kNever = std::numeric_limits<Tick>::max();

/// One execution slot of the static cyclic plan, repeated every major frame.
struct Window {
    int core = 0;
    Tick start = 0;
    Tick duration = 1;
    std::string partition;
};

struct Schedule {
    Tick major_frame = 1;
    std::vector<Window> windows;
    std::uint64_t context_switch_cycles = 0;
};

enum class PartitionKind { workload, gpu_manager };

/// Engine instruction set. Workload pipelines compile to a flat list of
/// these; costs are precomputed host-clock cycles.
struct Step {
    enum class Kind {
        burst,        // consumes `cycles` scheduled ticks (cpu work, transfers)
        acquire_gpu,  // send request (1 cycle), then busy-wait for the grant
        launch_kernel,// launch (1 cycle), then busy-wait until the device is done
        release_gpu,  // send release (1 cycle), fire and forget
    };
    Kind kind = Kind::burst;
    std::string label;
    std::uint64_t cycles = 0;         // burst cost
    std::uint64_t device_cycles = 0;  // host-clock kernel duration (launch_kernel)

    static Step burst(std::string label, std::uint64_t cycles);
    static Step acquire(std::string label = "acquire_gpu");
    static Step launch(std::string label, std::uint64_t device_cycles);
    static Step release(std::string label = "release_gpu");

    /// CPU-side cost charged to the partition when the step completes.
    std::uint64_t cost() const { return kind == Kind::burst ? cycles : 1; }
};

struct PartitionDesc {
    std::string id;
    PartitionKind kind = PartitionKind::workload;
    std::vector<Step> program;
};

/// Bounded FIFO of inter-partition messages. A message sent at tick t
/// becomes receivable at t+1.
class Port {
public:
    struct Message {
        std::vector<std::uint8_t> bytes;
        std::string sender;
        Tick visible_from = 0;
    };

    Port() = default;
    Port(std::string name, std::size_t capacity) : name_(std::move(name)), capacity_(capacity) {}

    const std::string& name() const { return name_; }
    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return fifo_.size(); }

    /// False when the port is full; the message is not enqueued.
    bool send(std::vector<std::uint8_t> bytes, const std::string& sender, Tick visible_from = 0);
    /// Pop the front message if one is visible at `now`.
    std::optional<Message> receive(Tick now = kNever);
    /// Earliest tick at which a queued message becomes visible.
    Tick next_visible() const;

private:
    std::string name_;
    std::size_t capacity_ = 1;
    std::deque<Message> fifo_;
};

enum class EventKind {
    window_start,
    window_end,
    step_exec,
    msg_send,
    msg_recv,
    gpu_busy,
    grant,
    release,
    block,
};

const char* event_kind_name(EventKind k);

struct TraceEvent {
    Tick tick = 0;
    int core = 0;
    EventKind kind = EventKind::step_exec;
    std::string partition;
    std::string detail;
};

/// `tick=<n> core=<k> part=<id> kind=<kind> detail=<text>`
std::string format_event(const TraceEvent& e);

/// Structural checks: window overlap per core, out-of-frame windows,
/// references to unknown partitions, manager presence when any program
/// touches the GPU. Empty result means the schedule is valid.
std::vector<std::string> validate_schedule(const Schedule& schedule,
                                           const std::vector<PartitionDesc>& partitions);

struct PartitionStats {
    bool completed = false;
    Tick completion_tick = 0;        // ticks elapsed when the program finished
    std::uint64_t executed_cycles = 0;
    std::uint64_t blocked_cycles = 0;
    std::uint64_t completed_step_cycles = 0;
    std::uint64_t partial_step_cycles = 0;  // progress inside an unfinished step
};

struct EngineResult {
    std::vector<TraceEvent> trace;
    std::map<std::string, PartitionStats> partitions;
    Tick end_tick = 0;
};

/// Run the scenario until `until` ticks or until every workload
/// partition completed its program, whichever is first. Deterministic:
/// identical inputs produce identical results and traces.
EngineResult run(const Schedule& schedule, const std::vector<PartitionDesc>& partitions,
                 Tick until, bool trace_enabled = true);

}  // namespace socsim::sched
