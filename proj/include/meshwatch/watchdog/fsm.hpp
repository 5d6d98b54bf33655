#pragma once

#include <array>
#include <cstdint>

// Finite state machine a monitor runs for each (neighbor, LMU) pair. States
// 5, 7 and 8 are final; a machine that reaches one of them terminates and
// its transition sequence is folded into the neighbor's transition matrix.

namespace meshwatch::watchdog {

enum class FsmState : int {
    Init = 1,        // no RREQ observed yet
    UnexpRrep = 2,   // RREP received without an observed RREQ
    RcvdRreq = 3,    // neighbor received a RREQ (monitor's own broadcast)
    FwdRreq = 4,     // neighbor broadcast a RREQ
    TimeoutRreq = 5, // no activity after a RREQ within the RREQ timeout
    RcvdRrep = 6,    // neighbor received a RREP
    LmuComplete = 7, // neighbor forwarded a RREP
    TimeoutRrep = 8, // no forward after a RREP within the RREP timeout
};

constexpr int kNumStates = 8;

constexpr int state_index(FsmState s) { return static_cast<int>(s) - 1; }

constexpr bool is_final(FsmState s) {
    return s == FsmState::TimeoutRreq || s == FsmState::LmuComplete ||
           s == FsmState::TimeoutRrep;
}

struct LegalTransition {
    FsmState from;
    FsmState to;
    const char* trigger;
};

/// The full transition table. M is the monitor, X the monitored neighbor.
constexpr std::array<LegalTransition, 15> legal_transitions() {
    using S = FsmState;
    return {{
        {S::Init, S::RcvdRreq, "M broadcasts RREQ; X assumed to receive"},
        {S::Init, S::FwdRreq, "X broadcasts a RREQ not previously sent by M"},
        {S::Init, S::UnexpRrep, "X receives a RREP with no RREQ observed"},
        {S::RcvdRreq, S::FwdRreq, "X rebroadcasts the RREQ M sent"},
        {S::RcvdRreq, S::RcvdRrep, "X receives a RREP"},
        {S::RcvdRreq, S::LmuComplete, "X transmits a RREP without observed receipt"},
        {S::RcvdRreq, S::TimeoutRreq, "RREQ timeout"},
        {S::FwdRreq, S::FwdRreq, "additional RREQ broadcast observed"},
        {S::FwdRreq, S::RcvdRrep, "X receives a RREP"},
        {S::FwdRreq, S::LmuComplete, "X transmits a RREP"},
        {S::FwdRreq, S::TimeoutRreq, "RREQ timeout"},
        {S::UnexpRrep, S::LmuComplete, "X forwards the unexpected RREP"},
        {S::UnexpRrep, S::TimeoutRrep, "RREP timeout"},
        {S::RcvdRrep, S::LmuComplete, "X forwards the RREP"},
        {S::RcvdRrep, S::TimeoutRrep, "RREP timeout"},
    }};
}

constexpr bool is_legal(FsmState from, FsmState to) {
    for (const auto& tr : legal_transitions()) {
        if (tr.from == from && tr.to == to) return true;
    }
    return false;
}

} // namespace meshwatch::watchdog
