"""Text format for synthesis problems and supervisors.

    # comment
    alphabet: a b
    controllable: a b
    observable: a b
    attacker_observable: a
    attacker_compromised: a

    automaton plant
    states: q0 q1
    initial: q0
    marked: q1            # optional, defaults to every state
    trans: q0 a q1
    end

Roles are plant, lower, upper, damage and supervisor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .attack import AttackConstraint, normalize_damage
from .automata import AutomatonError, Fsa
from .instance import SynthesisInstance
from .supervision import ControlConstraint, as_supervisor

ROLES = ("plant", "lower", "upper", "damage", "supervisor")
HEADERS = ("alphabet", "controllable", "observable", "attacker_observable", "attacker_compromised")


class InstanceParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class InstanceFile:
    alphabet: tuple
    controllable: frozenset
    observable: frozenset
    attacker_observable: frozenset
    attacker_compromised: frozenset
    automata: dict  # role -> Fsa, in file order
    notes: list = field(default_factory=list)

    @property
    def control(self) -> ControlConstraint:
        return ControlConstraint(self.alphabet, self.controllable, self.observable)

    @property
    def attack(self) -> AttackConstraint:
        return AttackConstraint(self.attacker_observable, self.attacker_compromised)

    def require(self, *roles):
        missing = [r for r in roles if r not in self.automata]
        if missing:
            raise InstanceParseError(f"missing automaton block(s): {', '.join(missing)}")

    def to_instance(self, n=1, m=1) -> SynthesisInstance:
        self.require("plant", "lower", "upper", "damage")
        a = self.automata
        return SynthesisInstance.build(a["plant"], a["lower"], a["upper"], a["damage"],
                                       self.control, self.attack, n=n, m=m)

    @property
    def supervisor(self) -> Fsa:
        self.require("supervisor")
        return as_supervisor(self.automata["supervisor"])


def _names(rest: str) -> list:
    return rest.split()


def parse_instance(text: str) -> InstanceFile:
    header = {}
    automata = {}
    starts = {}
    block = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if block is None:
            if line.startswith("automaton"):
                parts = line.split()
                if len(parts) != 2 or parts[1] not in ROLES:
                    raise InstanceParseError(f"expected 'automaton <role>' with role in {', '.join(ROLES)}", lineno)
                if parts[1] in automata:
                    raise InstanceParseError(f"second '{parts[1]}' block", lineno)
                if "alphabet" not in header:
                    raise InstanceParseError("'alphabet:' must precede automaton blocks", lineno)
                block = {"role": parts[1], "start": lineno, "trans": {}, "lines": {}}
                continue
            key, sep, rest = line.partition(":")
            key = key.strip()
            if not sep or key not in HEADERS:
                raise InstanceParseError(f"unexpected line {raw.strip()!r}", lineno)
            if key in header:
                raise InstanceParseError(f"'{key}:' given twice", lineno)
            names = _names(rest)
            if key == "alphabet":
                if len(set(names)) != len(names):
                    raise InstanceParseError("duplicate event in alphabet", lineno)
            else:
                sigma = header.get("alphabet")
                if sigma is None:
                    raise InstanceParseError("'alphabet:' must come first", lineno)
                unknown = [e for e in names if e not in sigma[0]]
                if unknown:
                    raise InstanceParseError(f"unknown event(s) {' '.join(unknown)}", lineno)
            header[key] = (tuple(names), lineno)
            continue
        if line == "end":
            automata[block["role"]] = _finish_block(block, header["alphabet"][0])
            starts[block["role"]] = block["start"]
            block = None
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in ("states", "initial", "marked", "trans"):
            raise InstanceParseError(f"unexpected line {raw.strip()!r} inside automaton block", lineno)
        if key == "trans":
            parts = rest.split()
            if len(parts) != 3:
                raise InstanceParseError("expected 'trans: <source> <event> <target>'", lineno)
            src, ev, dst = parts
            if (src, ev) in block["trans"]:
                raise InstanceParseError(f"second transition from {src} on {ev} (automata must be deterministic)", lineno)
            block["trans"][(src, ev)] = (dst, lineno)
        else:
            if key in block:
                raise InstanceParseError(f"'{key}:' given twice in one block", lineno)
            block[key] = _names(rest)
            block["lines"][key] = lineno
    if block is not None:
        raise InstanceParseError(f"automaton block opened at line {block['start']} has no 'end'")
    if "alphabet" not in header:
        raise InstanceParseError("no 'alphabet:' line")
    sigma = header["alphabet"][0]
    ctrl = frozenset(header.get("controllable", ((), 0))[0])
    comp, comp_line = header.get("attacker_compromised", ((), 0))
    if not set(comp) <= ctrl:
        bad = " ".join(e for e in comp if e not in ctrl)
        raise InstanceParseError(f"compromised event(s) {bad} are not controllable", comp_line)
    out = InstanceFile(
        alphabet=sigma,
        controllable=ctrl,
        observable=frozenset(header.get("observable", ((), 0))[0]),
        attacker_observable=frozenset(header.get("attacker_observable", ((), 0))[0]),
        attacker_compromised=frozenset(comp),
        automata=automata,
    )
    if "damage" in automata:
        try:
            _, notes = normalize_damage(automata["damage"])
        except AutomatonError as exc:
            raise InstanceParseError(f"damage automaton: {exc}", starts["damage"]) from None
        out.notes.extend(f"damage: {n}" for n in notes)
    return out


def _finish_block(block, sigma) -> Fsa:
    role, start = block["role"], block["start"]
    if "states" not in block:
        raise InstanceParseError(f"{role} block has no 'states:' line", start)
    states = block["states"]
    if len(set(states)) != len(states):
        raise InstanceParseError("duplicate state name", block["lines"]["states"])
    known = set(states)
    init = block.get("initial")
    if not init or len(init) != 1:
        raise InstanceParseError(f"{role} block needs exactly one initial state", block["lines"].get("initial", start))
    if init[0] not in known:
        raise InstanceParseError(f"undeclared initial state {init[0]}", block["lines"]["initial"])
    marked = block.get("marked")
    if marked is not None:
        for q in marked:
            if q not in known:
                raise InstanceParseError(f"undeclared marked state {q}", block["lines"]["marked"])
    trans = {}
    for (src, ev), (dst, lineno) in block["trans"].items():
        for q in (src, dst):
            if q not in known:
                raise InstanceParseError(f"undeclared state {q}", lineno)
        if ev not in sigma:
            raise InstanceParseError(f"unknown event {ev}", lineno)
        trans[(src, ev)] = dst
    return Fsa(tuple(states), sigma, trans, init[0], None if marked is None else frozenset(marked))


def write_automaton(role: str, f: Fsa, always_mark: bool = False) -> str:
    lines = [f"automaton {role}", "states: " + " ".join(map(str, f.states)), f"initial: {f.initial}"]
    if always_mark or f.marked != frozenset(f.states):
        lines.append("marked: " + " ".join(str(q) for q in f.states if q in f.marked))
    for q in f.states:
        for ev in f.alphabet:
            nxt = f.trans.get((q, ev))
            if nxt is not None:
                lines.append(f"trans: {q} {ev} {nxt}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def write_supervisor(sup: Fsa) -> str:
    return write_automaton("supervisor", sup)


def supervisor_file(sup: Fsa) -> str:
    """Standalone file holding just a supervisor, usable with ``--supervisor``."""
    return "alphabet: " + " ".join(sup.alphabet) + "\n\n" + write_supervisor(sup)


def serialize_instance(inst: InstanceFile) -> str:
    sigma = inst.alphabet

    def ordered(events):
        return " ".join(e for e in sigma if e in events)

    parts = [
        "alphabet: " + " ".join(sigma),
        "controllable: " + ordered(inst.controllable),
        "observable: " + ordered(inst.observable),
        "attacker_observable: " + ordered(inst.attacker_observable),
        "attacker_compromised: " + ordered(inst.attacker_compromised),
    ]
    text = "\n".join(p.rstrip() for p in parts) + "\n"
    for role in ROLES:
        if role in inst.automata:
            text += "\n" + write_automaton(role, inst.automata[role])
    return text


def instance_file(inst: SynthesisInstance, supervisor: Fsa | None = None) -> InstanceFile:
    """File view of a library instance (the damage automaton is written normalised)."""
    automata = {"plant": inst.plant, "lower": inst.lower, "upper": inst.upper, "damage": inst.damage.fsa}
    if supervisor is not None:
        automata["supervisor"] = supervisor
    return InstanceFile(inst.alphabet, inst.control.controllable, inst.control.observable,
                        inst.attack.observable, inst.attack.compromised, automata)
