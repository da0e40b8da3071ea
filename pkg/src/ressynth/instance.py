from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

from .attack import AttackConstraint, DamageAutomaton, attack_alphabet, normalize_damage
from .automata import Fsa, check_language_inclusion
from .supervision import ControlConstraint, command_space


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class SynthesisInstance:
    """Bounded resilient-supervisor synthesis problem (risky attackers)."""

    plant: Fsa
    lower: Fsa
    upper: Fsa
    damage: DamageAutomaton
    control: ControlConstraint
    attack: AttackConstraint
    n: int = 1
    m: int = 1
    semantics: str = "risky"
    notes: tuple = field(default=(), compare=False)

    @classmethod
    def build(cls, plant, lower, upper, damage: Fsa, control, attack, n=1, m=1, validate=True):
        dmg, notes = normalize_damage(damage)
        inst = cls(plant, lower, upper, dmg, control, attack, n, m, notes=tuple(notes))
        if validate:
            inst.validate()
        return inst

    def validate(self):
        sigma = set(self.control.alphabet)
        for role, f in (("plant", self.plant), ("lower", self.lower), ("upper", self.upper),
                        ("damage", self.damage.fsa)):
            if set(f.alphabet) != sigma:
                raise InstanceError(f"{role} automaton is not over the declared alphabet")
        try:
            self.attack.check(self.control)
        except ValueError as exc:
            raise InstanceError(str(exc)) from None
        if self.n < 1 or self.m < 1:
            raise InstanceError("bounds n and m must be at least 1")
        if self.semantics != "risky":
            raise InstanceError("only risky attacker semantics can be synthesised against")
        if not check_language_inclusion(self.lower, self.upper):
            raise InstanceError("lower specification is not contained in the upper one")

    def with_bounds(self, n=None, m=None) -> "SynthesisInstance":
        return replace(self, n=self.n if n is None else n, m=self.m if m is None else m)

    @property
    def alphabet(self) -> tuple:
        return self.control.alphabet

    @cached_property
    def commands(self) -> list:
        return command_space(self.control)

    @cached_property
    def observations(self) -> list:
        return attack_alphabet(self.attack, self.commands, self.alphabet)
