// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace socsim::arbiter {

/// Raised on any illegal protocol transition (release by a non-owner,
/// duplicate request, event not legal for the client's phase).
class ProtocolViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class MsgKind : std::uint8_t { request = 0, grant = 1, release = 2 };

struct ProtocolMsg {
    MsgKind kind = MsgKind::request;
    std::string partition;  // grantee for grants, sender otherwise

    bool operator==(const ProtocolMsg&) const = default;
};

/// Wire encoding on ports: 1 byte kind + u16 little-endian partition index.
/// The index refers to a scenario-level partition table.
std::vector<std::uint8_t> encode_msg(MsgKind kind, std::uint16_t partition_index);
std::pair<MsgKind, std::uint16_t> decode_msg(const std::vector<std::uint8_t>& bytes);

/// Device ownership plus the FIFO wait queue.
struct ManagerState {
    std::optional<std::string> owner;
    std::deque<std::string> queue;

    bool quiescent() const { return !owner && queue.empty(); }
};

/// Apply one inbound request/release to the manager. Requests are
/// granted immediately when the device is free, queued otherwise;
/// a release hands the device to the queue head. Returns the grants to
/// send out.
std::pair<ManagerState, std::vector<ProtocolMsg>> manager_handle(const ManagerState& state,
                                                                 const ProtocolMsg& msg);

enum class ClientPhase { idle, requested, held };
enum class ClientEvent { want_gpu, grant_received, done };

struct ClientState {
    ClientPhase phase = ClientPhase::idle;
    std::string partition;
};

/// Drive one client transition; returns the messages the client emits.
std::pair<ClientState, std::vector<ProtocolMsg>> client_step(const ClientState& state,
                                                             ClientEvent event);

}  // namespace socsim::arbiter
