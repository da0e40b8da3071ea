"""Shared generators and reference checks for the test-suite."""

import itertools

from ressynth.attack import AttackConstraint, MooreAttacker, attack_alphabet
from ressynth.automata import Fsa, words
from ressynth.encoding import Cnf, CnfBuilder, VarMap
from ressynth.instance import SynthesisInstance
from ressynth.named import SIGMA, chain, event_damage, repeat_damage
from ressynth.sat import sat_solve
from ressynth.supervision import ControlConstraint, command_space, enumerate_supervisors, state_names


def subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from (frozenset(c) for c in itertools.combinations(items, r))


def random_fsa(rng, n_states, alphabet=SIGMA, density=0.6, prefix="q"):
    states = tuple(f"{prefix}{i}" for i in range(n_states))
    trans = {}
    for q in states:
        for ev in alphabet:
            if rng.random() < density:
                trans[(q, ev)] = rng.choice(states)
    return Fsa(states, alphabet, trans, states[0])


def random_supervisor(rng, n, control, density=0.6):
    """A valid supervisor with states x0..x{n-1}."""
    xs = state_names(n)
    trans = {}
    for x in xs:
        for ev in control.alphabet:
            must = ev in control.uncontrollable
            if not must and rng.random() > density:
                continue
            trans[(x, ev)] = x if ev in control.unobservable else rng.choice(xs)
    return Fsa(xs, control.alphabet, trans, xs[0])


def random_constraints(rng, alphabet=SIGMA):
    ctrl = frozenset(e for e in alphabet if rng.random() < 0.6)
    obs = frozenset(e for e in alphabet if rng.random() < 0.6)
    comp = frozenset(e for e in ctrl if rng.random() < 0.6)
    atk_obs = frozenset(e for e in alphabet if rng.random() < 0.6)
    return ControlConstraint(alphabet, ctrl, obs), AttackConstraint(atk_obs, comp)


def random_attacker(rng, m, attack, observations, alphabet=SIGMA):
    trans = {(y, o): rng.randrange(m) for y in range(m) for o in observations}
    comp = [e for e in alphabet if e in attack.compromised]
    out = [frozenset(e for e in comp if rng.random() < 0.5) for _ in range(m)]
    return MooreAttacker(m, observations, trans, out)


# -- the fixed acceptance corpus ---------------------------------------------

PLANTS = (
    Fsa(("q0",), SIGMA, {("q0", "a"): "q0", ("q0", "b"): "q0"}, "q0"),
    Fsa(("q0", "q1", "q2"), SIGMA, {("q0", "a"): "q1", ("q0", "b"): "q2"}, "q0"),
    Fsa(("q0", "q1", "q2"), SIGMA,
        {("q0", "a"): "q1", ("q0", "b"): "q0", ("q1", "a"): "q2", ("q1", "b"): "q0", ("q2", "b"): "q2"}, "q0"),
)
DAMAGES = (("event-a", event_damage("a")), ("two-step", repeat_damage("a")))


def spec_options(plant):
    """(lower, upper) pairs drawn from the plant itself and single-string specs."""
    ws = sorted((w for w in words(plant, 2) if w), key=lambda w: (len(w), w))
    longest = [w for w in ws if len(w) == 2] or ws
    opts = [(plant, plant), (chain(()), plant)]
    for w in ws[:3]:
        opts.append((chain(w), plant))
    for w in longest[:2]:
        opts.append((chain(w), chain(w)))
        opts.append((chain(w[:1]), chain(w)))
    return opts


def corpus():
    """288 instances: every constraint combination over {a, b} times both damage kinds."""
    combos = []
    for ctrl in subsets(SIGMA):
        for comp in subsets(sorted(ctrl)):
            for obs in subsets(SIGMA):
                for atk_obs in subsets(SIGMA):
                    combos.append((ctrl, comp, obs, atk_obs))
    out = []
    idx = 0
    for dname, dmg in DAMAGES:
        for ctrl, comp, obs, atk_obs in combos:
            plant = PLANTS[idx % len(PLANTS)]
            opts = spec_options(plant)
            lower, upper = opts[(idx // len(PLANTS)) % len(opts)]
            inst = SynthesisInstance.build(plant, lower, upper, dmg, ControlConstraint(SIGMA, ctrl, obs),
                                           AttackConstraint(atk_obs, comp))
            out.append((f"c{idx:03d}-{dname}", inst))
            idx += 1
    return out


# -- QBF truth by expanding the universal block over attackers ------------------


def qbf_true_over_attackers(qbf, vm, attackers, observations):
    """Decide the ∃∀∃ formula, expanding ∀ over the given (valid) attackers.

    Assignments to the universal block that are not automata make the
    attacker premise false, so they never falsify the matrix.
    """
    (_, outer), (_, univ), (_, inner) = qbf.prefix
    univ_set, inner_set = set(univ), set(inner)
    n_vars = qbf.matrix.num_vars
    clauses = []
    next_id = n_vars
    for atk in attackers:
        values = {}
        for k in range(atk.size):
            for o, ob in enumerate(observations):
                for l in range(atk.size):
                    values[vm.id(("ta", k, o, l))] = atk.trans[(k, ob)] == l
        for vid, name in vm.items():
            if name[0] == "e":
                values[vid] = name[2] in atk.output[name[1]]
        missing = univ_set - set(values)
        assert not missing, "attacker does not fix the whole universal block"
        rename = {}
        for v in inner:
            next_id += 1
            rename[v] = next_id
        for c in qbf.matrix.clauses:
            new = []
            sat = False
            for lit in c:
                v = abs(lit)
                if v in univ_set:
                    if values[v] == (lit > 0):
                        sat = True
                        break
                    continue
                if v in inner_set:
                    v = rename[v]
                new.append(v if lit > 0 else -v)
            if not sat:
                clauses.append(tuple(new))
    return sat_solve(Cnf(next_id, clauses)).sat


def all_observations(inst):
    return attack_alphabet(inst.attack, command_space(inst.control), inst.alphabet)


def solve_formula(f):
    b = CnfBuilder(VarMap(), extend=True)
    b.add(f)
    res = sat_solve(b.cnf())
    return res, b.varmap


def brute_supervisors(n, control):
    return list(enumerate_supervisors(n, control))

