"""Supervisors: validity, control commands and the attack-aware transformation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, NamedTuple

from .automata import Fsa, AutomatonError, check_language_inclusion, sync_product

if TYPE_CHECKING:
    from .attack import AttackConstraint


class _Marker:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return (_lookup_marker, (self.name,))


def _lookup_marker(name):
    return {"x_halt": HALT, "x_dump": SUP_DUMP}[name]


HALT = _Marker("x_halt")
SUP_DUMP = _Marker("x_dump")


class SupervisorError(ValueError):
    pass


@dataclass(frozen=True)
class ControlConstraint:
    alphabet: tuple
    controllable: frozenset
    observable: frozenset

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "controllable", frozenset(self.controllable))
        object.__setattr__(self, "observable", frozenset(self.observable))
        extra = (self.controllable | self.observable) - set(self.alphabet)
        if extra:
            raise SupervisorError(f"events {sorted(extra)} are not in the alphabet")

    @property
    def uncontrollable(self) -> frozenset:
        return frozenset(self.alphabet) - self.controllable

    @property
    def unobservable(self) -> frozenset:
        return frozenset(self.alphabet) - self.observable

    def ordered(self, events) -> tuple:
        """``events`` in alphabet order."""
        return tuple(e for e in self.alphabet if e in events)


class Violation(NamedTuple):
    state: object
    event: str
    rule: str  # "controllability" | "observability"

    def __str__(self):
        return f"{self.rule} violated at state {self.state!r} on event {self.event!r}"


def validate_supervisor(sup: Fsa, control: ControlConstraint) -> list[Violation]:
    out = []
    uc, uo = control.uncontrollable, control.unobservable
    for x in sup.states:
        for ev in control.alphabet:
            nxt = sup.trans.get((x, ev))
            if ev in uc and nxt is None:
                out.append(Violation(x, ev, "controllability"))
            if ev in uo and nxt is not None and nxt != x:
                out.append(Violation(x, ev, "observability"))
    return out


def gamma(sup: Fsa, x) -> frozenset:
    """Control command issued at supervisor state ``x``."""
    if x not in set(sup.states):
        raise SupervisorError(f"unknown supervisor state {x!r}")
    return sup.enabled(x)


def command_space(control: ControlConstraint) -> list[frozenset]:
    """Every command containing all uncontrollable events.

    Indexed by the binary number whose bit ``i`` says whether the ``i``-th
    controllable event (alphabet order) is enabled.
    """
    base = control.uncontrollable
    ctrl = control.ordered(control.controllable)
    out = []
    for bits in range(1 << len(ctrl)):
        out.append(base | frozenset(e for i, e in enumerate(ctrl) if bits >> i & 1))
    return out


@dataclass(frozen=True)
class TransformedSupervisor:
    fsa: Fsa  # over X + [HALT]
    loops: dict  # (x, event) -> bool for compromised unobservable events
    original_states: tuple


def _check_attack(control: ControlConstraint, attack: "AttackConstraint"):
    bad = set(attack.compromised) - control.controllable
    if bad:
        raise SupervisorError(f"compromised events {sorted(bad)} are not controllable")


def transform(sup: Fsa, control: ControlConstraint, attack: "AttackConstraint") -> TransformedSupervisor:
    _check_attack(control, attack)
    trans = dict(sup.trans)
    loops = {}
    for x in sup.states:
        for ev in control.ordered(attack.compromised):
            defined = (x, ev) in sup.trans
            if ev in control.observable:
                if not defined:
                    trans[(x, ev)] = HALT
            else:
                loops[(x, ev)] = defined
                if not defined:
                    trans[(x, ev)] = x
    states = sup.states + (HALT,)
    fsa = Fsa(states, sup.alphabet, trans, sup.initial, frozenset(states))
    return TransformedSupervisor(fsa, loops, sup.states)


def untransform(t: TransformedSupervisor) -> Fsa:
    keep = set(t.original_states)
    trans = {}
    for (x, ev), nxt in t.fsa.trans.items():
        if x not in keep or nxt not in keep:
            continue
        if (x, ev) in t.loops and not t.loops[(x, ev)]:
            continue
        trans[(x, ev)] = nxt
    return Fsa(t.original_states, t.fsa.alphabet, trans, t.fsa.initial, frozenset(t.original_states))


def check_range_control(sup: Fsa, plant: Fsa, lower: Fsa, upper: Fsa) -> bool:
    closed = sync_product(sup, plant)
    return check_language_inclusion(lower, closed) and check_language_inclusion(closed, upper)


def build_obfuscation_bounds(ref: Fsa, plant: Fsa) -> tuple[Fsa, Fsa]:
    """Lower and upper specification for the obfuscation problem.

    Both equal the reachable closed loop ``ref || plant``, so range control
    pins the closed-loop language of any candidate to that of ``ref``.
    """
    closed = sync_product(ref, plant)
    names = tuple(f"s{i}" for i in range(len(closed.states)))
    index = dict(zip(closed.states, names))
    trans = {(index[s], e): index[d] for (s, e), d in closed.trans.items()}
    spec = Fsa(names, plant.alphabet, trans, index[closed.initial])
    return spec, spec


def state_names(n: int) -> tuple:
    return tuple(f"x{i}" for i in range(n))


def enumerate_supervisors(n: int, control: ControlConstraint) -> Iterator[Fsa]:
    """Every valid supervisor with exactly the states x0..x{n-1}.

    Unreachable states are allowed, so this covers all n-bounded ones.
    """
    if n < 1:
        raise SupervisorError("need at least one supervisor state")
    xs = state_names(n)
    slots = []
    choices = []
    for x in xs:
        for ev in control.alphabet:
            targets = [x] if ev in control.unobservable else list(xs)
            if ev in control.controllable:
                targets.append(None)
            slots.append((x, ev))
            choices.append(targets)
    for pick in itertools.product(*choices):
        trans = {slot: dst for slot, dst in zip(slots, pick) if dst is not None}
        yield Fsa(xs, control.alphabet, trans, xs[0], frozenset(xs))


def all_enable_supervisor(control: ControlConstraint) -> Fsa:
    trans = {("x0", ev): "x0" for ev in control.alphabet}
    return Fsa(("x0",), control.alphabet, trans, "x0", frozenset(["x0"]))


def as_supervisor(f: Fsa) -> Fsa:
    """Supervisors carry every state as marked."""
    if f.marked == frozenset(f.states):
        return f
    return Fsa(f.states, f.alphabet, f.trans, f.initial, frozenset(f.states))


__all__ = [
    "AutomatonError",
    "ControlConstraint",
    "HALT",
    "SUP_DUMP",
    "SupervisorError",
    "TransformedSupervisor",
    "Violation",
    "all_enable_supervisor",
    "as_supervisor",
    "build_obfuscation_bounds",
    "check_range_control",
    "command_space",
    "enumerate_supervisors",
    "gamma",
    "state_names",
    "transform",
    "untransform",
    "validate_supervisor",
]
