"""Decoding, counterexample search and the synthesis loops."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .attack import (
    EPS,
    MooreAttacker,
    all_enable_attacker,
    compose,
    damage_reachable,
)
from .automata import Fsa
from .encoding.cnf import CnfBuilder, VarMap
from .encoding.constraints import Encoder, EncodingError
from .encoding.formula import conj, conj_all, disj_all, implies, neg, var
from .instance import SynthesisInstance
from .sat import SatResult, SolverConfig, sat_solve
from .supervision import (
    HALT,
    TransformedSupervisor,
    check_range_control,
    state_names,
    untransform,
    validate_supervisor,
)


class DecodeError(EncodingError):
    """A model that does not describe an automaton (points at an encoding bug)."""


class VerificationError(RuntimeError):
    """A SAT-derived candidate failed the explicit re-check."""


class CegisExhausted(RuntimeError):
    def __init__(self, candidate, counterexamples):
        super().__init__(f"no verdict after {len(counterexamples)} refinements")
        self.candidate = candidate
        self.counterexamples = counterexamples


def model_values(result: SatResult, varmap: VarMap) -> dict:
    return {name: result.model[vid - 1] for vid, name in varmap.items()}


# -- decoding ---------------------------------------------------------------


def _one_target(values, key, targets):
    hits = [j for j in targets if values.get(key(j), False)]
    if len(hits) != 1:
        raise DecodeError(f"{len(hits)} successors selected for {key('*')}")
    return hits[0]


def decode_supervisor(values: dict, n: int, control, attack) -> Fsa:
    """Read the t/l variables back into a supervisor with states x0..x{n-1}."""
    xs = state_names(n)
    names = list(xs) + [HALT, None]
    trans = {}
    loops = {}
    for i in range(n):
        for ev in control.alphabet:
            j = _one_target(values, lambda j: ("t", i, ev, j), range(n + 2))
            if names[j] is not None:
                trans[(xs[i], ev)] = names[j]
            if ev in attack.compromised and ev not in control.observable:
                loops[(xs[i], ev)] = bool(values.get(("l", i, ev), False))
    fsa = Fsa(xs + (HALT,), control.alphabet, trans, xs[0])
    sup = untransform(TransformedSupervisor(fsa, loops, xs))
    bad = validate_supervisor(sup, control)
    if bad:
        raise DecodeError("decoded supervisor is invalid: " + "; ".join(map(str, bad)))
    return sup


def decode_attacker(values: dict, m: int, observations, attack, alphabet) -> MooreAttacker:
    obs = tuple(observations)
    trans = {}
    for k in range(m):
        for o, ob in enumerate(obs):
            trans[(k, ob)] = _one_target(values, lambda l: ("ta", k, o, l), range(m))
    comp = [e for e in alphabet if e in attack.compromised]
    output = [frozenset(e for e in comp if values.get(("e", k, e), False)) for k in range(m)]
    return MooreAttacker(m, obs, trans, output)


# -- outcomes ---------------------------------------------------------------


@dataclass
class Stats:
    sat_calls: int = 0
    iterations: int = 0
    conflicts: int = 0
    seconds: float = 0.0
    per_bound: list = field(default_factory=list)  # (n, verdict, sat_calls)


@dataclass
class Found:
    supervisor: Fsa
    n: int
    m: int
    certificate: list  # attackers the candidate was checked against
    stats: Stats = field(default_factory=Stats)
    found = True


@dataclass
class NotFoundAtBounds:
    n: int
    m: int
    iterations: int
    stats: Stats = field(default_factory=Stats)
    found = False


# -- counterexample search ----------------------------------------------------


def _all_enable(inst: SynthesisInstance) -> MooreAttacker:
    return all_enable_attacker(inst.attack, inst.observations)


def find_attacker(sup: Fsa, inst: SynthesisInstance, m: int | None = None, max_steps: int | None = None,
                  general: bool = False, semantics: str = "risky",
                  config: SolverConfig | None = None) -> MooreAttacker | None:
    """A successful attacker against ``sup``, or None.

    The default path composes with the all-enable attacker, which succeeds
    whenever any attacker does.  ``general=True`` instead searches
    symbolically for an ``m``-state attacker together with a damaging run.
    """
    if semantics != "risky":
        raise ValueError("attacker search only supports risky semantics")
    m = inst.m if m is None else m
    if not general:
        atk = _all_enable(inst)
        loop = compose(atk, sup, inst.plant, inst.damage, inst.control, inst.attack)
        return atk if damage_reachable(loop) else None
    return _bmc_attacker(sup, inst, m, max_steps, config)


def _bmc_attacker(sup, inst, m, max_steps, config):
    bad = validate_supervisor(sup, inst.control)
    if bad:
        raise ValueError("; ".join(map(str, bad)))
    plant, dmg = inst.plant, inst.damage.fsa
    comp, sup_sees, atk_sees = inst.attack.compromised, inst.control.observable, inst.attack.observable
    observations = inst.observations
    obs_index = {o: i for i, o in enumerate(observations)}
    xs = list(sup.states) + [HALT]
    bound = m * (len(sup.states) + 2) * (len(plant.states) + 1) * len(dmg.states)
    K = bound if max_steps is None else min(max_steps, bound)
    cmd = {x: sup.enabled(x) for x in sup.states}
    moves = list(inst.alphabet) + [None]  # None = stutter

    def Y(s, k):
        return var(("by", s, k))

    def X(s, i):
        return var(("bx", s, i))

    def Q(s, q):
        return var(("bq", s, q))

    def W(s, w):
        return var(("bw", s, w))

    def E(s, ev):
        return var(("bev", s, ev))

    def TA(k, o, l):
        return var(("ta", k, o, l))

    def EN(k, ev):
        return var(("e", k, ev))

    out = []

    def exactly_one(lits):
        out.append(disj_all(lits))
        for a in range(len(lits)):
            for b in range(a + 1, len(lits)):
                out.append(disj_all([neg(lits[a]), neg(lits[b])]))

    for k in range(m):
        for o in range(len(observations)):
            exactly_one([TA(k, o, l) for l in range(m)])
    for s in range(K + 1):
        exactly_one([Y(s, k) for k in range(m)])
        exactly_one([X(s, i) for i in range(len(xs))])
        exactly_one([Q(s, q) for q in plant.states])
        exactly_one([W(s, w) for w in dmg.states])
    out += [Y(0, 0), X(0, xs.index(sup.initial)), Q(0, plant.initial), W(0, dmg.initial), W(K, inst.damage.sink)]
    halt = len(xs) - 1
    for s in range(K):
        exactly_one([E(s, ev) for ev in moves])
        idle = E(s, None)
        for k in range(m):
            out.append(implies(conj(idle, Y(s, k)), Y(s + 1, k)))
        for i in range(len(xs)):
            out.append(implies(conj(idle, X(s, i)), X(s + 1, i)))
        for q in plant.states:
            out.append(implies(conj(idle, Q(s, q)), Q(s + 1, q)))
        for w in dmg.states:
            out.append(implies(conj(idle, W(s, w)), W(s + 1, w)))
        for ev in inst.alphabet:
            fire = E(s, ev)
            out.append(neg(conj(fire, X(s, halt))))
            for q in plant.states:
                q2 = plant.trans.get((q, ev))
                out.append(implies(conj(fire, Q(s, q)), False if q2 is None else Q(s + 1, q2)))
            for w in dmg.states:
                out.append(implies(conj(fire, W(s, w)), W(s + 1, dmg.trans[(w, ev)])))
            if ev in comp:
                for k in range(m):
                    out.append(implies(conj(fire, Y(s, k)), EN(k, ev)))
            for i, x in enumerate(xs[:-1]):
                z = sup.trans.get((x, ev))
                here = conj(fire, X(s, i))
                if z is None and ev not in comp:
                    out.append(neg(here))
                    continue
                if z is None:
                    x2, new_cmd = (HALT if ev in sup_sees else x), EPS
                else:
                    x2 = z
                    new_cmd = cmd[z] if ev in sup_sees and cmd[z] != cmd[x] else EPS
                out.append(implies(here, X(s + 1, xs.index(x2))))
                seen = ev if ev in atk_sees else EPS
                for k in range(m):
                    if seen is EPS and new_cmd is EPS:
                        out.append(implies(conj(here, Y(s, k)), Y(s + 1, k)))
                    else:
                        o = obs_index[(seen, new_cmd)]
                        for l in range(m):
                            out.append(implies(conj(here, Y(s, k), TA(k, o, l)), Y(s + 1, l)))
    b = CnfBuilder(VarMap(), extend=True)
    b.add(conj_all(out))
    res = sat_solve(b.cnf(), config)
    if not res.sat:
        return None
    atk = decode_attacker(model_values(res, b.varmap), m, observations, inst.attack, inst.alphabet)
    loop = compose(atk, sup, plant, inst.damage, inst.control, inst.attack)
    if not damage_reachable(loop):
        raise VerificationError("attacker decoded from a damaging run does not reach damage")
    return atk


# -- synthesis ----------------------------------------------------------------


def _verify(sup, inst):
    bad = validate_supervisor(sup, inst.control)
    if bad:
        raise VerificationError("candidate supervisor is invalid: " + "; ".join(map(str, bad)))
    if not check_range_control(sup, inst.plant, inst.lower, inst.upper):
        raise VerificationError("candidate supervisor violates range control")


def _solve(enc: Encoder, formula, config, stats: Stats):
    b = CnfBuilder(enc.varmap.copy(), extend=True)
    b.add(formula)
    res = sat_solve(b.cnf(), config)
    stats.sat_calls += 1
    stats.conflicts += res.conflicts
    return res, b.varmap


def synthesize_direct(inst: SynthesisInstance, config: SolverConfig | None = None) -> Found | NotFoundAtBounds:
    """One SAT call with the all-enable attacker folded in, then an explicit re-check."""
    start = time.monotonic()
    stats = Stats(iterations=1)
    enc = Encoder(inst)
    atk = _all_enable(inst)
    formula = conj(enc.synthesis_base(), enc.build_safety(attacker=atk, copy=0))
    res, vm = _solve(enc, formula, config, stats)
    stats.seconds = time.monotonic() - start
    if not res.sat:
        return NotFoundAtBounds(inst.n, inst.m, 1, stats)
    sup = decode_supervisor(model_values(res, vm), inst.n, inst.control, inst.attack)
    _verify(sup, inst)
    if find_attacker(sup, inst) is not None:
        raise VerificationError("synthesised supervisor is attackable; the encoding is unsound here")
    stats.seconds = time.monotonic() - start
    return Found(sup, inst.n, inst.m, [atk], stats)


def synthesize_cegis(inst: SynthesisInstance, max_iters: int = 10, general: bool = False,
                     config: SolverConfig | None = None) -> Found | NotFoundAtBounds:
    """Alternate candidate synthesis and attacker search until one side gives up."""
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    start = time.monotonic()
    stats = Stats()
    enc = Encoder(inst)
    base = enc.synthesis_base()
    counterexamples = []
    parts = [base]
    sup = None
    for it in range(1, max_iters + 1):
        stats.iterations = it
        res, vm = _solve(enc, conj_all(parts), config, stats)
        if not res.sat:
            stats.seconds = time.monotonic() - start
            return NotFoundAtBounds(inst.n, inst.m, it, stats)
        sup = decode_supervisor(model_values(res, vm), inst.n, inst.control, inst.attack)
        _verify(sup, inst)
        atk = find_attacker(sup, inst, general=general, config=config)
        if atk is None:
            stats.seconds = time.monotonic() - start
            return Found(sup, inst.n, inst.m, counterexamples, stats)
        if atk in counterexamples:
            raise VerificationError("attacker search returned a counterexample that was already excluded")
        counterexamples.append(atk)
        parts.append(enc.build_safety(attacker=atk, copy=len(counterexamples)))
    raise CegisExhausted(sup, counterexamples)


METHODS = {"direct": synthesize_direct, "cegis": synthesize_cegis}


def bound_schedule(inst: SynthesisInstance, n_max: int, method: str = "direct",
                   config: SolverConfig | None = None) -> Found | NotFoundAtBounds:
    """Try n = inst.n, inst.n + 1, ... n_max and stop at the first success."""
    if n_max < inst.n:
        raise ValueError("n_max is below the starting bound")
    run = METHODS[method]
    total = Stats()
    outcome = None
    for n in range(inst.n, n_max + 1):
        outcome = run(inst.with_bounds(n=n), config=config)
        s = outcome.stats
        total.sat_calls += s.sat_calls
        total.iterations += s.iterations
        total.conflicts += s.conflicts
        total.seconds += s.seconds
        total.per_bound.append((n, "found" if outcome.found else "not-found", s.sat_calls))
        if outcome.found:
            break
    outcome.stats = total
    return outcome
