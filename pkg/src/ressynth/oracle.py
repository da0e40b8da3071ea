"""Exhaustive reference procedures, used to cross-check the SAT pipeline."""

from __future__ import annotations

from .attack import compose, damage_reachable, enumerate_attackers
from .instance import SynthesisInstance
from .supervision import check_range_control, enumerate_supervisors


def resists_all(sup, inst: SynthesisInstance, m: int, cap: int = 100_000) -> bool:
    """No attacker with at most ``m`` states reaches damage against ``sup``.

    Attackers with fewer states are covered by ``m``-state ones with
    unreachable states, so enumerating size ``m`` alone suffices.
    """
    for atk in enumerate_attackers(m, inst.attack, inst.observations, inst.alphabet, cap):
        loop = compose(atk, sup, inst.plant, inst.damage, inst.control, inst.attack, check=False)
        if damage_reachable(loop):
            return False
    return True


def oracle_synthesize(inst: SynthesisInstance, n: int | None = None, m: int | None = None, cap: int = 100_000):
    """First supervisor (enumeration order) that meets range control and resists every attacker."""
    n = inst.n if n is None else n
    m = inst.m if m is None else m
    for sup in enumerate_supervisors(n, inst.control):
        if check_range_control(sup, inst.plant, inst.lower, inst.upper) and resists_all(sup, inst, m, cap):
            return sup
    return None


def oracle_solutions(inst: SynthesisInstance, n: int | None = None, m: int | None = None, cap: int = 100_000):
    n = inst.n if n is None else n
    m = inst.m if m is None else m
    return [sup for sup in enumerate_supervisors(n, inst.control)
            if check_range_control(sup, inst.plant, inst.lower, inst.upper) and resists_all(sup, inst, m, cap)]
