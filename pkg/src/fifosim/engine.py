"""Deterministic slotted-time engine.

Each slot runs three phases: (i) arrivals, offered to the policy one at a
time in trace order; (ii) processing, the policy selects at most C packets
and each selected packet loses one residual cycle; (iii) transmission,
zero-residual packets permitted by the policy's gate leave in queue order.
The engine keeps running drain slots past the last arrival until the buffer
empties, so throughput counts everything the policy would deliver.

``run`` dispatches to per-policy fast loops (counters only) unless an event
log or occupancy series was requested; both paths produce identical counts.
"""

from __future__ import annotations

from .core import BufferState, Packet, SimulationResult, SlotEvents, SimulationError
from .policies import make_policy
from .trace import Trace, TraceError, validate_trace


def run(
    trace: Trace,
    policy,
    buffer_size: int,
    cores: int,
    *,
    record_events: bool = False,
    record_occupancy: bool = False,
    validate: bool = True,
) -> SimulationResult:
    """Simulate one policy over one trace and return its accounting.

    ``policy`` is a registry id or a :class:`Policy` instance.  Identical
    inputs produce identical results, event logs included.
    """
    if buffer_size < 1:
        raise ValueError(f"buffer_size must be >= 1, got {buffer_size}")
    if cores < 1:
        raise ValueError(f"cores must be >= 1, got {cores}")
    if validate:
        errors = validate_trace(trace)
        if errors:
            raise TraceError("invalid trace: " + "; ".join(errors))
    if isinstance(policy, str) and not record_events and not record_occupancy:
        fast = _FAST_LOOPS.get(policy)
        if fast is None:
            make_policy(policy)  # raises UnknownPolicyError with the id list
        slots, works = _flatten(trace)
        counts = fast(slots, works, buffer_size, cores)
        return SimulationResult(policy=policy, buffer_size=buffer_size, cores=cores, **counts)
    return _run_general(trace, policy, buffer_size, cores, record_events, record_occupancy)


def _flatten(trace: Trace) -> tuple[list[int], list[int]]:
    slots: list[int] = []
    works: list[int] = []
    for slot, batch in trace.events:
        slots.extend([slot] * len(batch))
        works.extend(batch)
    return slots, works


def _run_general(trace, policy, buffer_size, cores, record_events, record_occupancy):
    pol = make_policy(policy)
    state = BufferState(capacity=buffer_size)
    queue = state.queue
    events = trace.events
    n_events = len(events)
    ev_idx = 0
    next_id = 1
    admitted = dropped = pushed = transmitted = 0
    t = 0
    final_slot = 0
    log: list[SlotEvents] | None = [] if record_events else None
    occupancy: list[int] | None = [] if record_occupancy else None

    while True:
        if queue:
            t += 1
        elif ev_idx < n_events:
            t = events[ev_idx][0]
        else:
            break
        slot_ev = SlotEvents(slot=t) if record_events else None

        # phase (i): arrivals, one offer at a time
        while ev_idx < n_events and events[ev_idx][0] == t:
            for work in events[ev_idx][1]:
                pkt = Packet(next_id, t, work, work)
                next_id += 1
                decision = pol.on_arrival(state, pkt)
                if decision.is_accept:
                    if state.is_full():
                        raise SimulationError(
                            f"{pol.name}: accept with a full buffer at slot {t}"
                        )
                    queue.append(pkt)
                    admitted += 1
                    if slot_ev:
                        slot_ev.admitted.append(pkt.id)
                elif decision.is_pushout:
                    victim = queue[state.find(decision.victim_id)]
                    if victim.residual_work <= pkt.required_work:
                        # push-out must strictly reduce total residual work
                        raise SimulationError(
                            f"{pol.name}: push-out of residual {victim.residual_work} "
                            f"for work {pkt.required_work} at slot {t}"
                        )
                    queue.remove(victim)
                    queue.append(pkt)
                    admitted += 1
                    pushed += 1
                    if slot_ev:
                        slot_ev.pushed_out.append((victim.id, pkt.id))
                        slot_ev.admitted.append(pkt.id)
                else:
                    dropped += 1
                    if slot_ev:
                        slot_ev.dropped_on_arrival.append(pkt.id)
            ev_idx += 1

        # phase (ii): processing
        selected = pol.select_processing(state, cores)
        if len(selected) > cores:
            raise SimulationError(f"{pol.name}: selected {len(selected)} > C={cores}")
        if selected:
            by_id = {p.id: p for p in queue}
            seen = set()
            for pid in selected:
                if pid in seen:
                    raise SimulationError(f"{pol.name}: packet {pid} selected twice")
                seen.add(pid)
                pkt = by_id[pid]
                if pkt.residual_work <= 0:
                    raise SimulationError(f"{pol.name}: packet {pid} selected at zero residual")
                pkt.residual_work -= 1
        pol.note_processed(selected)
        if slot_ev:
            slot_ev.processed.extend(selected)

        # phase (iii): transmission
        if selected:
            kept = []
            for p in queue:
                if p.residual_work == 0 and pol.may_transmit(state, p):
                    transmitted += 1
                    if slot_ev:
                        slot_ev.transmitted.append(p.id)
                else:
                    kept.append(p)
            if len(kept) != len(queue):
                queue[:] = kept
        elif queue and ev_idx >= n_events:
            raise SimulationError(f"{pol.name}: no progress with {len(queue)} packets queued")

        final_slot = t
        if log is not None:
            log.append(slot_ev)
        if occupancy is not None:
            occupancy.append(len(queue))

    if admitted != transmitted + pushed:
        raise SimulationError(
            f"{pol.name}: conservation violated "
            f"(admitted {admitted} != transmitted {transmitted} + pushed out {pushed})"
        )
    return SimulationResult(
        policy=pol.name,
        buffer_size=buffer_size,
        cores=cores,
        final_slot=final_slot,
        transmitted_count=transmitted,
        dropped_count=dropped,
        pushout_count=pushed,
        admitted_count=admitted,
        events=log,
        occupancy_series=occupancy,
    )


# ---------------------------------------------------------------------------
# Fast loops: counters only, no Packet objects.  The queue is a plain list of
# residuals (head at index 0); admission order equals list order because
# arrivals always append at the tail.


def _counts(final_slot, transmitted, dropped, pushed, admitted):
    return {
        "final_slot": final_slot,
        "transmitted_count": transmitted,
        "dropped_count": dropped,
        "pushout_count": pushed,
        "admitted_count": admitted,
    }


def _fast_npo(slots, works, B, C):
    q: list[int] = []
    n = len(slots)
    i = 0
    admitted = dropped = transmitted = 0
    t = final = 0
    while True:
        if q:
            t += 1
        elif i < n:
            t = slots[i]
        else:
            break
        while i < n and slots[i] == t:
            if len(q) < B:
                q.append(works[i])
                admitted += 1
            else:
                dropped += 1
            i += 1
        if q:
            if C == 1:
                r = q[0] - 1
                if r:
                    q[0] = r
                else:
                    del q[0]
                    transmitted += 1
            else:
                j = C if C < len(q) else len(q)
                head = [q[idx] - 1 for idx in range(j)]
                kept = [r for r in head if r]
                transmitted += j - len(kept)
                q[:j] = kept
        final = t
    return _counts(final, transmitted, dropped, 0, admitted)


def _fast_po(slots, works, B, C):
    q: list[int] = []
    n = len(slots)
    i = 0
    admitted = dropped = pushed = transmitted = 0
    t = final = 0
    while True:
        if q:
            t += 1
        elif i < n:
            t = slots[i]
        else:
            break
        while i < n and slots[i] == t:
            w = works[i]
            i += 1
            if len(q) < B:
                q.append(w)
                admitted += 1
            else:
                mx = max(q)
                if w < mx:
                    del q[q.index(mx)]
                    q.append(w)
                    admitted += 1
                    pushed += 1
                else:
                    dropped += 1
        if q:
            if C == 1:
                r = q[0] - 1
                if r:
                    q[0] = r
                else:
                    del q[0]
                    transmitted += 1
            else:
                j = C if C < len(q) else len(q)
                head = [q[idx] - 1 for idx in range(j)]
                kept = [r for r in head if r]
                transmitted += j - len(kept)
                q[:j] = kept
        final = t
    return _counts(final, transmitted, dropped, pushed, admitted)


def _fast_lpo(slots, works, B, C):
    # marked packets form a prefix of the queue, tracked by count alone;
    # m > 0 means drain mode.
    q: list[int] = []
    m = 0
    n = len(slots)
    i = 0
    admitted = dropped = pushed = transmitted = 0
    t = final = 0
    while True:
        if q:
            t += 1
        elif i < n:
            t = slots[i]
        else:
            break
        while i < n and slots[i] == t:
            w = works[i]
            i += 1
            if len(q) < B:
                q.append(w)
                admitted += 1
            else:
                mx = max(q)
                if w < mx:
                    del q[q.index(mx)]  # residual > 1, so never a marked packet
                    q.append(w)
                    admitted += 1
                    pushed += 1
                else:
                    dropped += 1
        if q:
            if m == 0:
                sel = []
                for idx in range(len(q)):
                    if q[idx] > 1:
                        sel.append(idx)
                        if len(sel) == C:
                            break
                if sel:
                    for idx in sel:
                        q[idx] -= 1
                else:
                    m = len(q)  # everything at one cycle: mark all, drain
            if m > 0:
                j = C if C < m else m
                del q[:j]
                m -= j
                transmitted += j
        final = t
    return _counts(final, transmitted, dropped, pushed, admitted)


def _fast_lpo_p(slots, works, B, C):
    # like _fast_lpo plus a parallel "selected last processing phase" flag
    # used to exclude in-process packets from eviction.
    q: list[int] = []
    ip: list[bool] = []
    m = 0
    n = len(slots)
    i = 0
    admitted = dropped = pushed = transmitted = 0
    t = final = 0
    while True:
        if q:
            t += 1
        elif i < n:
            t = slots[i]
        else:
            break
        while i < n and slots[i] == t:
            w = works[i]
            i += 1
            if len(q) < B:
                q.append(w)
                ip.append(False)
                admitted += 1
            else:
                best = 0
                bidx = -1
                for idx in range(len(q)):
                    if not ip[idx] and q[idx] > best:
                        best = q[idx]
                        bidx = idx
                if bidx >= 0 and w < best:
                    del q[bidx]
                    del ip[bidx]
                    q.append(w)
                    ip.append(False)
                    admitted += 1
                    pushed += 1
                else:
                    dropped += 1
        if q:
            if m == 0:
                sel = []
                for idx in range(len(q)):
                    if q[idx] > 1:
                        sel.append(idx)
                        if len(sel) == C:
                            break
                if sel:
                    for idx in range(len(ip)):
                        ip[idx] = False
                    for idx in sel:
                        q[idx] -= 1
                        ip[idx] = True
                else:
                    m = len(q)
            if m > 0:
                j = C if C < m else m
                del q[:j]
                del ip[:j]
                m -= j
                transmitted += j
                for idx in range(len(ip)):
                    ip[idx] = False
        final = t
    return _counts(final, transmitted, dropped, pushed, admitted)


def _fast_srpt(slots, works, B, C):
    q: list[int] = []
    n = len(slots)
    i = 0
    admitted = dropped = pushed = transmitted = 0
    t = final = 0
    while True:
        if q:
            t += 1
        elif i < n:
            t = slots[i]
        else:
            break
        while i < n and slots[i] == t:
            w = works[i]
            i += 1
            if len(q) < B:
                q.append(w)
                admitted += 1
            else:
                mx = max(q)
                if w < mx:
                    del q[q.index(mx)]
                    q.append(w)
                    admitted += 1
                    pushed += 1
                else:
                    dropped += 1
        if q:
            if C == 1:
                bidx = 0
                best = q[0]
                for idx in range(1, len(q)):
                    if q[idx] < best:
                        best = q[idx]
                        bidx = idx
                if best == 1:
                    del q[bidx]
                    transmitted += 1
                else:
                    q[bidx] = best - 1
            else:
                order = sorted(range(len(q)), key=q.__getitem__)
                chosen = order[: C if C < len(q) else len(q)]
                for idx in chosen:
                    q[idx] -= 1
                for idx in sorted((x for x in chosen if q[x] == 0), reverse=True):
                    del q[idx]
                    transmitted += 1
        final = t
    return _counts(final, transmitted, dropped, pushed, admitted)


_FAST_LOOPS = {
    "npo": _fast_npo,
    "po": _fast_po,
    "lpo": _fast_lpo,
    "lpo_p": _fast_lpo_p,
    "srpt": _fast_srpt,
}
