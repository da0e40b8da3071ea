"""Small hand-made instances with known answers."""

from __future__ import annotations

from .attack import AttackConstraint
from .automata import Fsa
from .instance import SynthesisInstance
from .supervision import ControlConstraint

SIGMA = ("a", "b")


def chain(word, alphabet=SIGMA, prefix="p") -> Fsa:
    """Automaton whose closed language is the prefixes of ``word``."""
    states = tuple(f"{prefix}{i}" for i in range(len(word) + 1))
    trans = {(states[i], ev): states[i + 1] for i, ev in enumerate(word)}
    return Fsa(states, alphabet, trans, states[0])


def event_damage(ev="a", alphabet=SIGMA) -> Fsa:
    """Damage as soon as ``ev`` happens."""
    trans = {("w0", e): "w0" for e in alphabet if e != ev}
    trans[("w0", ev)] = "wm"
    return Fsa(("w0", "wm"), alphabet, trans, "w0", frozenset(["wm"]))


def repeat_damage(ev="a", alphabet=SIGMA) -> Fsa:
    """Damage once ``ev`` happens twice in a row."""
    trans = {}
    for e in alphabet:
        if e == ev:
            trans[("w0", e)] = "w1"
            trans[("w1", e)] = "wm"
        else:
            trans[("w0", e)] = "w0"
            trans[("w1", e)] = "w0"
    return Fsa(("w0", "w1", "wm"), alphabet, trans, "w0", frozenset(["wm"]))


def _fork_plant() -> Fsa:
    return Fsa(("q0", "q1", "q2"), SIGMA, {("q0", "a"): "q1", ("q0", "b"): "q2"}, "q0")


def inst1(n=1, m=1) -> SynthesisInstance:
    """The damaging event is compromised, so no supervisor helps."""
    plant = _fork_plant()
    return SynthesisInstance.build(
        plant, chain("b"), plant, event_damage("a"),
        ControlConstraint(SIGMA, {"a", "b"}, {"a", "b"}),
        AttackConstraint({"a", "b"}, {"a"}), n=n, m=m)


def inst2(n=1, m=1) -> SynthesisInstance:
    """Same plant, but the attacker holds b: disabling a suffices."""
    plant = _fork_plant()
    return SynthesisInstance.build(
        plant, chain("b"), plant, event_damage("a"),
        ControlConstraint(SIGMA, {"a", "b"}, {"a", "b"}),
        AttackConstraint({"a", "b"}, {"b"}), n=n, m=m)


def b_only_supervisor() -> Fsa:
    return Fsa(("x0",), SIGMA, {("x0", "b"): "x0"}, "x0")


def memory_instance(n=1, m=1) -> SynthesisInstance:
    """Needs two supervisor states: a must be disabled right after an a."""
    plant = Fsa(("q0",), SIGMA, {("q0", "a"): "q0", ("q0", "b"): "q0"}, "q0")
    return SynthesisInstance.build(
        plant, chain("ab"), plant, repeat_damage("a"),
        ControlConstraint(SIGMA, {"a", "b"}, {"a", "b"}),
        AttackConstraint({"a", "b"}, {"b"}), n=n, m=m)


def alternating_supervisor() -> Fsa:
    return Fsa(("x0", "x1"), SIGMA, {("x0", "a"): "x1", ("x1", "b"): "x0"}, "x0")
