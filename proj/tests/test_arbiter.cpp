// Copyright (c) 2026 socsim contributors
// SPDX-License-Identifier: Apache-2.0

#include <deque>
#include <map>
#include <random>

#include "doctest.h"
#include "socsim/arbiter.hpp"

using namespace socsim::arbiter;

TEST_CASE("manager grants immediately when the device is free") {
    ManagerState s;
    auto [next, out] = manager_handle(s, ProtocolMsg{MsgKind::request, "P1"});
    CHECK(next.owner == "P1");
    CHECK(next.queue.empty());
    REQUIRE(out.size() == 1);
    CHECK(out[0] == ProtocolMsg{MsgKind::grant, "P1"});
}

TEST_CASE("manager queues and hands over in FIFO order") {
    ManagerState s;
    s = manager_handle(s, {MsgKind::request, "P1"}).first;
    auto [s2, out2] = manager_handle(s, {MsgKind::request, "P2"});
    CHECK(out2.empty());
    auto [s3, out3] = manager_handle(s2, {MsgKind::request, "P3"});
    CHECK(s3.queue == std::deque<std::string>{"P2", "P3"});

    auto [s4, out4] = manager_handle(s3, {MsgKind::release, "P1"});
    CHECK(s4.owner == "P2");
    CHECK(s4.queue == std::deque<std::string>{"P3"});
    REQUIRE(out4.size() == 1);
    CHECK(out4[0] == ProtocolMsg{MsgKind::grant, "P2"});

    auto [s5, out5] = manager_handle(s4, {MsgKind::release, "P2"});
    CHECK(s5.owner == "P3");
    CHECK(s5.queue.empty());
    CHECK(out5[0] == ProtocolMsg{MsgKind::grant, "P3"});

    auto [s6, out6] = manager_handle(s5, {MsgKind::release, "P3"});
    CHECK(s6.quiescent());
    CHECK(out6.empty());
}

TEST_CASE("manager protocol violations") {
    ManagerState s;
    s = manager_handle(s, {MsgKind::request, "P1"}).first;

    SUBCASE("release from a non-owner") {
        CHECK_THROWS_AS(manager_handle(s, {MsgKind::release, "P2"}), ProtocolViolation);
    }
    SUBCASE("release with no owner") {
        ManagerState empty;
        CHECK_THROWS_AS(manager_handle(empty, {MsgKind::release, "P1"}), ProtocolViolation);
    }
    SUBCASE("duplicate request from the owner") {
        CHECK_THROWS_AS(manager_handle(s, {MsgKind::request, "P1"}), ProtocolViolation);
    }
    SUBCASE("duplicate request from a queued partition") {
        s = manager_handle(s, {MsgKind::request, "P2"}).first;
        CHECK_THROWS_AS(manager_handle(s, {MsgKind::request, "P2"}), ProtocolViolation);
    }
    SUBCASE("grant at the manager") {
        CHECK_THROWS_AS(manager_handle(s, {MsgKind::grant, "P1"}), ProtocolViolation);
    }
}

TEST_CASE("client state machine") {
    ClientState c;
    c.partition = "P1";

    auto [c1, out1] = client_step(c, ClientEvent::want_gpu);
    CHECK(c1.phase == ClientPhase::requested);
    REQUIRE(out1.size() == 1);
    CHECK(out1[0] == ProtocolMsg{MsgKind::request, "P1"});

    auto [c2, out2] = client_step(c1, ClientEvent::grant_received);
    CHECK(c2.phase == ClientPhase::held);
    CHECK(out2.empty());

    auto [c3, out3] = client_step(c2, ClientEvent::done);
    CHECK(c3.phase == ClientPhase::idle);
    CHECK(out3[0] == ProtocolMsg{MsgKind::release, "P1"});

    SUBCASE("illegal event/phase pairs") {
        CHECK_THROWS_AS(client_step(c2, ClientEvent::want_gpu), ProtocolViolation);
        CHECK_THROWS_AS(client_step(c, ClientEvent::done), ProtocolViolation);
        CHECK_THROWS_AS(client_step(c, ClientEvent::grant_received), ProtocolViolation);
    }
}

TEST_CASE("wire encoding round trips") {
    for (auto kind : {MsgKind::request, MsgKind::grant, MsgKind::release}) {
        for (std::uint16_t idx : {0, 1, 255, 256, 65535}) {
            auto bytes = encode_msg(kind, idx);
            REQUIRE(bytes.size() == 3);
            auto [k, i] = decode_msg(bytes);
            CHECK(k == kind);
            CHECK(i == idx);
        }
    }
    CHECK_THROWS_AS(decode_msg({0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(decode_msg({7, 0, 0}), std::invalid_argument);
}

// -------------------------------------------------------------------------
// Randomized interleaving harness. A random scheduler drives N clients and
// the manager; every seed must uphold mutual exclusion, FIFO grant order,
// starvation freedom and quiescence.
// -------------------------------------------------------------------------

namespace {

struct InterleavingResult {
    bool finished = false;
    std::vector<std::string> processed_requests;  // manager processing order
    std::vector<std::string> grant_order;
};

InterleavingResult run_interleaving(std::uint32_t seed, int max_steps = 200000) {
    std::mt19937 rng(seed);
    int n_clients = 2 + static_cast<int>(rng() % 5);  // 2..6

    struct Client {
        ClientState st;
        int uses_left;
        int hold_left = 0;
        bool grant_pending = false;
    };
    std::vector<Client> clients(static_cast<size_t>(n_clients));
    for (int i = 0; i < n_clients; ++i) {
        clients[i].st.partition = "P" + std::to_string(i);
        clients[i].uses_left = 1 + static_cast<int>(rng() % 3);
    }

    ManagerState mgr;
    std::deque<ProtocolMsg> inbox;
    InterleavingResult result;

    auto all_done = [&] {
        for (const auto& c : clients)
            if (c.uses_left > 0 || c.st.phase != ClientPhase::idle) return false;
        return true;
    };

    for (int step = 0; step < max_steps; ++step) {
        if (all_done() && inbox.empty()) {
            result.finished = true;
            break;
        }
        int who = static_cast<int>(rng() % static_cast<unsigned>(n_clients + 1));
        if (who == n_clients) {
            // manager's turn: process one message
            if (inbox.empty()) continue;
            ProtocolMsg msg = inbox.front();
            inbox.pop_front();
            if (msg.kind == MsgKind::request) result.processed_requests.push_back(msg.partition);
            auto [next, out] = manager_handle(mgr, msg);
            mgr = std::move(next);
            for (const auto& g : out) {
                result.grant_order.push_back(g.partition);
                clients[static_cast<size_t>(std::stoi(g.partition.substr(1)))].grant_pending =
                    true;
            }
            continue;
        }
        Client& c = clients[static_cast<size_t>(who)];
        switch (c.st.phase) {
            case ClientPhase::idle:
                if (c.uses_left > 0 && rng() % 2 == 0) {
                    auto [st, out] = client_step(c.st, ClientEvent::want_gpu);
                    c.st = std::move(st);
                    inbox.push_back(out.front());
                }
                break;
            case ClientPhase::requested:
                if (c.grant_pending) {
                    c.grant_pending = false;
                    c.st = client_step(c.st, ClientEvent::grant_received).first;
                    c.hold_left = 1 + static_cast<int>(rng() % 5);  // bounded hold
                }
                break;
            case ClientPhase::held: {
                // mutual exclusion: the holder must be the manager's owner
                REQUIRE(mgr.owner);
                REQUIRE(*mgr.owner == c.st.partition);
                int others_holding = 0;
                for (const auto& o : clients)
                    if (o.st.phase == ClientPhase::held) ++others_holding;
                REQUIRE(others_holding == 1);

                if (--c.hold_left <= 0) {
                    auto [st, out] = client_step(c.st, ClientEvent::done);
                    c.st = std::move(st);
                    c.uses_left -= 1;
                    inbox.push_back(out.front());
                }
                break;
            }
        }
    }
    if (result.finished) {
        // quiescence
        REQUIRE(mgr.quiescent());
    }
    return result;
}

}  // namespace

TEST_CASE("randomized interleavings: exclusion, FIFO, starvation freedom, quiescence") {
    int seeds = 1100;
    for (std::uint32_t seed = 0; seed < static_cast<std::uint32_t>(seeds); ++seed) {
        CAPTURE(seed);
        InterleavingResult r = run_interleaving(seed);
        // starvation freedom: every run with bounded holds terminates
        REQUIRE(r.finished);
        // FIFO fairness: grants mirror request processing order exactly
        REQUIRE(r.grant_order == r.processed_requests);
    }
}
