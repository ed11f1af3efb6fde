// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "socsim/arbiter.hpp"

#include <algorithm>

namespace socsim::arbiter {

std::vector<std::uint8_t> encode_msg(MsgKind kind, std::uint16_t partition_index) {
    return {static_cast<std::uint8_t>(kind), static_cast<std::uint8_t>(partition_index & 0xff),
            static_cast<std::uint8_t>(partition_index >> 8)};
}

std::pair<MsgKind, std::uint16_t> decode_msg(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() != 3) {
        throw std::invalid_argument("protocol message must be 3 bytes, got " +
                                    std::to_string(bytes.size()));
    }
    if (bytes[0] > 2) {
        throw std::invalid_argument("unknown protocol message kind " + std::to_string(bytes[0]));
    }
    std::uint16_t idx = static_cast<std::uint16_t>(bytes[1] | (bytes[2] << 8));
    return {static_cast<MsgKind>(bytes[0]), idx};
}

std::pair<ManagerState, std::vector<ProtocolMsg>> manager_handle(const ManagerState& state,
                                                                 const ProtocolMsg& msg) {
    ManagerState next = state;
    std::vector<ProtocolMsg> out;

    switch (msg.kind) {
        case MsgKind::request: {
            bool queued = std::find(next.queue.begin(), next.queue.end(), msg.partition) !=
                          next.queue.end();
            if ((next.owner && *next.owner == msg.partition) || queued) {
                throw ProtocolViolation("duplicate request from '" + msg.partition + "'");
            }
            if (!next.owner) {
                next.owner = msg.partition;
                out.push_back(ProtocolMsg{MsgKind::grant, msg.partition});
            } else {
                next.queue.push_back(msg.partition);
            }
            break;
        }
        case MsgKind::release: {
            if (!next.owner || *next.owner != msg.partition) {
                throw ProtocolViolation("release from non-owner '" + msg.partition + "'");
            }
            if (next.queue.empty()) {
                next.owner.reset();
            } else {
                next.owner = next.queue.front();
                next.queue.pop_front();
                out.push_back(ProtocolMsg{MsgKind::grant, *next.owner});
            }
            break;
        }
        case MsgKind::grant:
            throw ProtocolViolation("manager received a grant message");
    }
    return {std::move(next), std::move(out)};
}

std::pair<ClientState, std::vector<ProtocolMsg>> client_step(const ClientState& state,
                                                             ClientEvent event) {
    ClientState next = state;
    std::vector<ProtocolMsg> out;
    switch (event) {
        case ClientEvent::want_gpu:
            if (state.phase != ClientPhase::idle) {
                throw ProtocolViolation("want_gpu while not idle ('" + state.partition + "')");
            }
            next.phase = ClientPhase::requested;
            out.push_back(ProtocolMsg{MsgKind::request, state.partition});
            break;
        case ClientEvent::grant_received:
            if (state.phase != ClientPhase::requested) {
                throw ProtocolViolation("grant received while not requested ('" +
                                        state.partition + "')");
            }
            next.phase = ClientPhase::held;
            break;
        case ClientEvent::done:
            if (state.phase != ClientPhase::held) {
                throw ProtocolViolation("done while not holding ('" + state.partition + "')");
            }
            next.phase = ClientPhase::idle;
            out.push_back(ProtocolMsg{MsgKind::release, state.partition});
            break;
    }
    return {std::move(next), std::move(out)};
}

}  // namespace socsim::arbiter
