"""Actuator attackers and the attacked closed loop.

An attacker is a complete Moore machine.  It reads pairs
``(event, command)`` where either half may be ``None`` (nothing
observed, never both), and its output at each state is the set of
compromised events it currently enables.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .automata import Fsa, AutomatonError, complete, fresh_name
from .supervision import HALT, ControlConstraint, SupervisorError, validate_supervisor

EPS = None


class AttackError(ValueError):
    pass


@dataclass(frozen=True)
class AttackConstraint:
    observable: frozenset
    compromised: frozenset

    def __post_init__(self):
        object.__setattr__(self, "observable", frozenset(self.observable))
        object.__setattr__(self, "compromised", frozenset(self.compromised))

    def check(self, control: ControlConstraint):
        bad = self.compromised - control.controllable
        if bad:
            raise AttackError(f"compromised events {sorted(bad)} are not controllable")
        extra = self.observable - set(control.alphabet)
        if extra:
            raise AttackError(f"attacker-observable events {sorted(extra)} are not in the alphabet")


def attack_alphabet(attack: AttackConstraint, commands, alphabet) -> list[tuple]:
    """Observation alphabet in a fixed order: (e, g) pairs, then (e, eps), then (eps, g)."""
    seen = [e for e in alphabet if e in attack.observable]
    out = [(e, g) for e in seen for g in commands]
    out += [(e, EPS) for e in seen]
    out += [(EPS, g) for g in commands]
    return out


@dataclass(frozen=True)
class MooreAttacker:
    size: int
    observations: tuple
    trans: dict  # (y, observation) -> y'
    output: tuple  # y -> frozenset of enabled compromised events

    def __post_init__(self):
        object.__setattr__(self, "observations", tuple(self.observations))
        object.__setattr__(self, "output", tuple(frozenset(o) for o in self.output))
        if len(self.output) != self.size:
            raise AttackError("one output per attacker state required")
        for y in range(self.size):
            for obs in self.observations:
                nxt = self.trans.get((y, obs))
                if nxt is None or not 0 <= nxt < self.size:
                    raise AttackError(f"attacker transition undefined at y{y} on {format_observation(obs)}")

    def describe(self) -> str:
        lines = [f"attacker states: {' '.join(f'y{i}' for i in range(self.size))}"]
        for y in range(self.size):
            lines.append(f"output: y{y} {' '.join(sorted(self.output[y])) or '-'}")
        for y in range(self.size):
            for obs in self.observations:
                nxt = self.trans[(y, obs)]
                if nxt != y:
                    lines.append(f"trans: y{y} {format_observation(obs)} y{nxt}")
        lines.append("(unlisted observations self-loop)")
        return "\n".join(lines)


def format_observation(obs) -> str:
    ev, cmd = obs
    left = "eps" if ev is EPS else ev
    right = "eps" if cmd is EPS else "{" + ",".join(sorted(cmd)) + "}"
    return f"({left},{right})"


def all_enable_attacker(attack: AttackConstraint, observations) -> MooreAttacker:
    obs = tuple(observations)
    return MooreAttacker(1, obs, {(0, o): 0 for o in obs}, (attack.compromised,))


def count_attackers(m: int, n_obs: int, n_compromised: int) -> int:
    return m ** (m * n_obs) * 2 ** (m * n_compromised)


def enumerate_attackers(m: int, attack: AttackConstraint, observations, alphabet, cap: int = 100_000) -> Iterator[MooreAttacker]:
    obs = tuple(observations)
    total = count_attackers(m, len(obs), len(attack.compromised))
    if total > cap:
        raise AttackError(f"{total} attackers of size {m} exceed the enumeration cap {cap}")
    comp = [e for e in alphabet if e in attack.compromised]
    subsets = [frozenset(c for i, c in enumerate(comp) if bits >> i & 1) for bits in range(1 << len(comp))]
    slots = [(y, o) for y in range(m) for o in obs]
    for targets in itertools.product(range(m), repeat=len(slots)):
        trans = dict(zip(slots, targets))
        for outs in itertools.product(subsets, repeat=m):
            yield MooreAttacker(m, obs, trans, outs)


@dataclass(frozen=True)
class DamageAutomaton:
    fsa: Fsa  # complete
    sink: object  # the single marked state

    @property
    def initial(self):
        return self.fsa.initial

    @property
    def states(self):
        return self.fsa.states


def normalize_damage(h: Fsa) -> tuple[DamageAutomaton, list[str]]:
    """Complete ``h`` and merge its marked sinks into one damage state.

    Missing transitions at marked states become self-loops; a marked state
    with an edge to another state is rejected.  Returns the notes on what
    was changed so callers can report them.
    """
    notes = []
    marked = [q for q in h.states if q in h.marked]
    for q in marked:
        for ev in h.alphabet:
            nxt = h.trans.get((q, ev))
            if nxt is not None and nxt != q:
                raise AutomatonError(f"damage state {q!r} is marked but not a sink (leaves on {ev!r})")
    trans = dict(h.trans)
    for q in marked:
        for ev in h.alphabet:
            if (q, ev) not in trans:
                trans[(q, ev)] = q
                notes.append(f"added self-loop {q} -{ev}-> {q} at damage state")
    states = list(h.states)
    if not marked:
        sink = fresh_name("w_m", states)
        states.append(sink)
        for ev in h.alphabet:
            trans[(sink, ev)] = sink
        notes.append("damage automaton has no marked state; added an unreachable damage sink")
    else:
        sink = marked[0]
        if len(marked) > 1:
            merged = set(marked[1:])
            trans = {k: (sink if v in merged else v) for k, v in trans.items() if k[0] not in merged}
            states = [q for q in states if q not in merged]
            notes.append(f"merged damage states {', '.join(map(str, marked))} into {sink}")
    base = Fsa(tuple(states), h.alphabet, trans, h.initial, frozenset([sink]))
    if not base.is_complete():
        full = complete(base, dump=fresh_name("w_safe", base.states))
        notes.append(f"completed damage automaton with absorbing state {full.dump}")
        base = Fsa(full.states, full.alphabet, full.trans, full.initial, frozenset([sink]))
    return DamageAutomaton(base, sink), notes


@dataclass
class AttackedLoop:
    states: list  # (y, x, q, w), insertion order is BFS order
    trans: dict  # (state, event) -> state
    initial: tuple
    damage: frozenset  # reachable states whose damage component is the sink

    def projections(self) -> set:
        return {s[1:] for s in self.states}

    def halted(self) -> list:
        return [s for s in self.states if s[1] is HALT]


def compose(attacker: MooreAttacker, sup: Fsa, plant: Fsa, damage: DamageAutomaton,
            control: ControlConstraint, attack: AttackConstraint, check: bool = True) -> AttackedLoop:
    """Reachable part of the attacked closed loop synchronised with the damage automaton."""
    if check:
        attack.check(control)
        bad = validate_supervisor(sup, control)
        if bad:
            raise SupervisorError("; ".join(map(str, bad)))
    comp = attack.compromised
    seen_by_atk = attack.observable
    seen_by_sup = control.observable
    events = control.alphabet
    cmd = {x: sup.enabled(x) for x in sup.states}
    h = damage.fsa.trans
    init = (0, sup.initial, plant.initial, damage.initial)
    order = [init]
    seen = {init}
    trans = {}
    queue = deque([init])
    while queue:
        cur = queue.popleft()
        y, x, q, w = cur
        if x is HALT:
            continue
        for ev in events:
            z = sup.trans.get((x, ev))
            if ev in comp:
                if ev not in attacker.output[y]:
                    continue
            elif z is None:
                continue
            q2 = plant.trans.get((q, ev))
            if q2 is None:
                continue
            if z is None:
                x2 = HALT if ev in seen_by_sup else x
                new_cmd = EPS
            else:
                x2 = z
                new_cmd = cmd[z] if ev in seen_by_sup and cmd[z] != cmd[x] else EPS
            ev_seen = ev if ev in seen_by_atk else EPS
            if ev_seen is EPS and new_cmd is EPS:
                y2 = y
            else:
                y2 = attacker.trans[(y, (ev_seen, new_cmd))]
            nxt = (y2, x2, q2, h[(w, ev)])
            trans[(cur, ev)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    dmg = frozenset(s for s in order if s[3] == damage.sink)
    return AttackedLoop(order, trans, init, dmg)


def damage_reachable(loop: AttackedLoop) -> bool:
    return bool(loop.damage)


def is_successful(attacker, sup, plant, damage, control, attack, semantics: str = "risky") -> bool:
    loop = compose(attacker, sup, plant, damage, control, attack)
    if semantics == "risky":
        return damage_reachable(loop)
    if semantics == "covert":
        caught = any(s[3] != damage.sink for s in loop.halted())
        return damage_reachable(loop) and not caught
    raise AttackError(f"unknown semantics {semantics!r}")
