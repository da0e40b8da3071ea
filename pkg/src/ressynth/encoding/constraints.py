"""Propositional encoding of bounded resilient supervisor synthesis.

Supervisor states are indexed ``0..n-1``; index ``n`` is the halt state
and ``n+1`` the dump state of the completed transformed supervisor.
Attacker states are ``0..m-1`` and attacker observations are referred to
by their position in the instance's observation list.

Variable descriptors::

    ("t", i, ev, j)             completed transformed supervisor moves i -ev-> j
    ("l", i, ev)                supervisor enables compromised unobservable ev at i
    ("ta", k, o, l)             attacker moves k -obs[o]-> l
    ("e", k, ev)                attacker enables compromised ev at k
    ("rl", i, q, p)             (i, q, p) reachable in  sup x plant x lower
    ("rr", i, q, p)             (i, q, p) reachable in  sup x plant x upper
    ("rs", c, k, i, q, w)       (k, i, q, w) reachable in the attacked loop, copy c
"""

from __future__ import annotations

from itertools import combinations

from ..attack import EPS, MooreAttacker, format_observation
from ..automata import Fsa, complete
from ..instance import SynthesisInstance
from ..supervision import HALT, ControlConstraint, transform
from .cnf import CnfBuilder, Qbf, VarMap
from .formula import FormulaError, conj, conj_all, disj_all, iff, implies, neg, substitute, var


class EncodingError(ValueError):
    pass


def allocate_vars(n: int, m: int, inst: SynthesisInstance) -> VarMap:
    if n < 1 or m < 1:
        raise EncodingError("bounds must be positive")
    c, a = inst.control, inst.attack
    sigma = inst.alphabet
    rows = range(n + 2)
    vm = VarMap()
    for i in rows:
        for ev in sigma:
            for j in rows:
                vm.add(("t", i, ev, j))
    hidden = [ev for ev in sigma if ev in a.compromised and ev not in c.observable]
    for i in range(n):
        for ev in hidden:
            vm.add(("l", i, ev))
    n_obs = len(inst.observations)
    for k in range(m):
        for o in range(n_obs):
            for l in range(m):
                vm.add(("ta", k, o, l))
    for k in range(m):
        for ev in sigma:
            if ev in a.compromised:
                vm.add(("e", k, ev))
    plant = complete(inst.plant).states
    for fam, spec in (("rl", inst.lower), ("rr", inst.upper)):
        spec_states = complete(spec).states
        for i in rows:
            for q in plant:
                for p in spec_states:
                    vm.add((fam, i, q, p))
    for k in range(m):
        for i in rows:
            for q in plant:
                for w in inst.damage.states:
                    vm.add(("rs", 0, k, i, q, w))
    return vm


def supervisor_assignment(sup: Fsa, n: int, control: ControlConstraint, attack) -> dict:
    """Values of the t/l variables describing ``sup`` (transformed, then completed)."""
    if len(sup.states) != n:
        raise EncodingError(f"supervisor has {len(sup.states)} states, bound is {n}")
    order = [sup.initial] + [x for x in sup.states if x != sup.initial]
    index = {x: i for i, x in enumerate(order)}
    index[HALT] = n
    ts = transform(sup, control, attack)
    out = {}
    for x in order:
        i = index[x]
        for ev in control.alphabet:
            nxt = ts.fsa.trans.get((x, ev))
            target = n + 1 if nxt is None else index[nxt]
            for j in range(n + 2):
                out[("t", i, ev, j)] = j == target
    for i in (n, n + 1):
        for ev in control.alphabet:
            for j in range(n + 2):
                out[("t", i, ev, j)] = j == n + 1
    for (x, ev), flag in ts.loops.items():
        out[("l", index[x], ev)] = flag
    return out


def attacker_assignment(attacker: MooreAttacker, observations) -> dict:
    if tuple(observations) != attacker.observations:
        raise EncodingError("attacker is over a different observation alphabet")
    out = {}
    m = attacker.size
    for k in range(m):
        for o, obs in enumerate(observations):
            nxt = attacker.trans[(k, obs)]
            for l in range(m):
                out[("ta", k, o, l)] = l == nxt
    return out


class Encoder:
    """Builds the constraint groups for one instance at bounds (n, m)."""

    def __init__(self, inst: SynthesisInstance, n: int | None = None, m: int | None = None):
        self.inst = inst
        self.n = inst.n if n is None else n
        self.m = inst.m if m is None else m
        self.sigma = inst.alphabet
        self.control = inst.control
        self.attack = inst.attack
        self.compromised = inst.attack.compromised
        self.atk_sees = inst.attack.observable
        self.sup_sees = inst.control.observable
        self.ctrl = inst.control.ordered(inst.control.controllable)
        self.plant = complete(inst.plant)
        self.lower = complete(inst.lower)
        self.upper = complete(inst.upper)
        self.damage = inst.damage
        self.commands = inst.commands
        self.observations = inst.observations
        self.obs_index = {o: i for i, o in enumerate(self.observations)}
        self.halt = self.n
        self.dump = self.n + 1
        self.sup_rows = range(self.n)
        self.all_rows = range(self.n + 2)
        self.varmap = allocate_vars(self.n, self.m, inst)
        self._omega = {}
        self._phi = {}
        self._psi = {}

    # -- variables ---------------------------------------------------------

    def t(self, i, ev, j):
        return ("v", ("t", i, ev, j))

    def l(self, i, ev):
        return ("v", ("l", i, ev))

    def hidden_compromised(self, ev) -> bool:
        return ev in self.compromised and ev not in self.sup_sees

    def x_vars(self) -> list:
        return [vid for vid, name in self.varmap.items() if name[0] in ("t", "l")]

    def y_vars(self) -> list:
        return [vid for vid, name in self.varmap.items() if name[0] in ("ta", "e")]

    def family(self, *fams) -> list:
        return [vid for vid, name in self.varmap.items() if name[0] in fams]

    # -- supervisor --------------------------------------------------------

    def build_supervisor_fsa_constraints(self):
        n = self.n
        out = []
        for i in self.sup_rows:
            for ev in self.sigma:
                for j, k in combinations(self.all_rows, 2):
                    out.append(disj_all([neg(self.t(i, ev, j)), neg(self.t(i, ev, k))]))
        for i in self.sup_rows:
            for ev in self.sigma:
                out.append(disj_all([self.t(i, ev, j) for j in self.all_rows]))
        for ev in self.sigma:
            out.append(self.t(n, ev, n + 1))
        for ev in self.sigma:
            out.append(self.t(n + 1, ev, n + 1))
        return conj_all(out)

    def build_supervisor_control_constraints(self):
        n = self.n
        c = self.control
        out = []
        for i in self.sup_rows:
            for ev in self.sigma:
                inside = disj_all([self.t(i, ev, j) for j in self.sup_rows])
                if ev in c.uncontrollable:
                    out.append(inside)
                if ev in c.unobservable and ev not in self.compromised:
                    out.append(implies(inside, self.t(i, ev, i)))
                if self.hidden_compromised(ev):
                    out.append(self.t(i, ev, i))
                if ev in self.compromised and ev in self.sup_sees:
                    # a disabled observable compromised event must lead to halt, never to dump
                    out.append(neg(self.t(i, ev, n + 1)))
                else:
                    out.append(neg(self.t(i, ev, n)))
        return conj_all(out)

    def build_supervisor_constraints(self):
        return conj(self.build_supervisor_fsa_constraints(), self.build_supervisor_control_constraints())

    # -- attacker ----------------------------------------------------------

    def build_attacker_constraints(self):
        out = []
        ys = range(self.m)
        for k in ys:
            for o in range(len(self.observations)):
                for j, l in combinations(ys, 2):
                    out.append(disj_all([neg(var(("ta", k, o, j))), neg(var(("ta", k, o, l)))]))
        for k in ys:
            for o in range(len(self.observations)):
                out.append(disj_all([var(("ta", k, o, l)) for l in ys]))
        return conj_all(out)

    # -- range control -----------------------------------------------------

    def _inclusion(self, fam, spec, left):
        n = self.n
        plant = self.plant

        def r(i, q, p):
            return ("v", (fam, i, q, p))

        out = [r(0, plant.initial, spec.initial)]

        def step(src, guard, dst):
            if src != dst:
                out.append(implies(conj(src, guard), dst))

        for ev in self.sigma:
            special = self.hidden_compromised(ev)
            for q in plant.states:
                q2 = plant.trans[(q, ev)]
                for p in spec.states:
                    p2 = spec.trans[(p, ev)]
                    if special:
                        for i in self.sup_rows:
                            step(r(i, q, p), self.l(i, ev), r(i, q2, p2))
                            if left:
                                # a disabled hidden event leaves the supervisor's language
                                step(r(i, q, p), neg(self.l(i, ev)), r(n + 1, q2, p2))
                        rows = (n, n + 1)
                        for i in rows:
                            for j in rows:
                                step(r(i, q, p), self.t(i, ev, j), r(j, q2, p2))
                    else:
                        for i in self.all_rows:
                            for j in self.all_rows:
                                step(r(i, q, p), self.t(i, ev, j), r(j, q2, p2))
        if left:
            live = [p for p in spec.states if p != spec.dump]
            for p in live:
                for q in plant.states:
                    out.append(neg(r(n, q, p)))
                    out.append(neg(r(n + 1, q, p)))
                for i in self.all_rows:
                    out.append(neg(r(i, plant.dump, p)))
        else:
            for i in self.sup_rows:
                for q in plant.states:
                    if q != plant.dump:
                        out.append(neg(r(i, q, spec.dump)))
        return conj_all(out)

    def build_left_inclusion(self):
        return self._inclusion("rl", self.lower, left=True)

    def build_right_inclusion(self):
        return self._inclusion("rr", self.upper, left=False)

    # -- command helpers ---------------------------------------------------

    def omega(self, i, ev):
        """True iff the supervisor itself enables ``ev`` at state ``i``."""
        if not 0 <= i < self.n:
            raise EncodingError(f"omega is defined on supervisor states only, got index {i}")
        key = (i, ev)
        f = self._omega.get(key)
        if f is None:
            if self.hidden_compromised(ev):
                f = self.l(i, ev)
            else:
                f = disj_all([self.t(i, ev, j) for j in self.sup_rows])
            self._omega[key] = f
        return f

    def phi(self, i, j):
        """True iff moving from ``i`` to ``j`` leaves the control command unchanged."""
        if j >= self.n:
            return True
        key = (i, j)
        f = self._phi.get(key)
        if f is None:
            if i == j:
                f = True
            else:
                f = conj_all([iff(self.omega(i, ev), self.omega(j, ev)) for ev in self.ctrl])
            self._phi[key] = f
        return f

    def psi(self, j, command):
        """True iff the command issued at ``j`` is ``command``."""
        if not 0 <= j < self.n:
            raise EncodingError(f"psi is defined on supervisor states only, got index {j}")
        key = (j, command)
        f = self._psi.get(key)
        if f is None:
            f = conj_all([self.omega(j, ev) if ev in command else neg(self.omega(j, ev)) for ev in self.ctrl])
            self._psi[key] = f
        return f

    # -- safety ------------------------------------------------------------

    def _attacker_view(self, attacker):
        if attacker is None:
            return self.m, (lambda k, o, l: ("v", ("ta", k, o, l))), (lambda k, ev: ("v", ("e", k, ev)))
        if attacker.observations != tuple(self.observations):
            raise EncodingError("attacker is over a different observation alphabet")
        obs = self.observations

        def ta(k, o, l):
            return attacker.trans[(k, obs[o])] == l

        def en(k, ev):
            return ev in attacker.output[k]

        return attacker.size, ta, en

    def _moves(self, ev, i, j, k, m, ta, en):
        """(guard, l) pairs for the attacked-loop step i -ev-> j from attacker state k."""
        t = self.t(i, ev, j)
        gate = en(k, ev) if ev in self.compromised else self.omega(i, ev)
        seen = ev in self.atk_sees
        if ev not in self.sup_sees:
            if not seen:
                yield conj(t, gate), k
            else:
                o = self.obs_index[(ev, EPS)]
                for l in range(m):
                    yield conj(t, ta(k, o, l), gate), l
            return
        same = self.phi(i, j)
        if not seen:
            yield conj(t, gate, same), k
        else:
            o = self.obs_index[(ev, EPS)]
            for l in range(m):
                yield conj(t, ta(k, o, l), gate, same), l
        if j < self.n:
            changed = neg(same)
            for command in self.commands:
                o = self.obs_index[(ev if seen else EPS, command)]
                cmd_ok = self.psi(j, command)
                for l in range(m):
                    yield conj(t, ta(k, o, l), gate, changed, cmd_ok), l

    def build_safety(self, attacker: MooreAttacker | None = None, copy: int = 0):
        """Reachability in the attacked loop plus the no-damage requirement.

        With ``attacker`` given, its transitions and outputs are folded in
        as constants; ``copy`` selects an independent set of reachability
        variables.
        """
        m, ta, en = self._attacker_view(attacker)
        plant, dmg = self.plant, self.damage.fsa
        n = self.n

        def r(k, i, q, w):
            return ("v", ("rs", copy, k, i, q, w))

        out = [r(0, 0, plant.initial, dmg.initial)]
        for ev in self.sigma:
            hidden_to_sup = ev not in self.sup_sees
            sources = self.all_rows if (ev in self.compromised and hidden_to_sup) else self.sup_rows
            succ_q = [(q, plant.trans[(q, ev)]) for q in plant.states]
            succ_w = [(w, dmg.trans[(w, ev)]) for w in dmg.states]
            for i in sources:
                for j in self.all_rows:
                    for k in range(m):
                        for guard, l in self._moves(ev, i, j, k, m, ta, en):
                            if guard is False:
                                continue
                            for q, q2 in succ_q:
                                for w, w2 in succ_w:
                                    src, dst = r(k, i, q, w), r(l, j, q2, w2)
                                    if src != dst:
                                        out.append(implies(conj(src, guard), dst))
        for k in range(m):
            for i in range(n + 1):
                for q in plant.states:
                    if q != plant.dump:
                        out.append(neg(r(k, i, q, self.damage.sink)))
        return conj_all(out)

    def instantiate_attacker(self, formula, attacker: MooreAttacker, copy: int):
        """Fold a concrete attacker into a formula built with a symbolic one."""
        if attacker.observations != tuple(self.observations) or attacker.size != self.m:
            raise EncodingError("attacker dimensions do not match the encoding")
        values = attacker_assignment(attacker, self.observations)
        for k in range(attacker.size):
            for ev in self.sigma:
                if ev in self.compromised:
                    values[("e", k, ev)] = ev in attacker.output[k]

        def lookup(name):
            if name[0] == "rs":
                return ("rs", copy) + name[2:]
            return values.get(name)

        return substitute(formula, lookup)

    def fix_supervisor(self, formula, sup: Fsa):
        values = supervisor_assignment(sup, self.n, self.control, self.attack)
        return substitute(formula, values)

    # -- assembly ----------------------------------------------------------

    def assemble_resilient_qbf(self) -> tuple[Qbf, VarMap]:
        vm = self.varmap.copy()
        b = CnfBuilder(vm)
        b.add(self.build_supervisor_constraints())
        b.add(self.build_left_inclusion())
        b.add(self.build_right_inclusion())
        outer_aux = list(b.aux)
        b.add(implies(self.build_attacker_constraints(), self.build_safety()))
        inner_aux = b.aux[len(outer_aux):]
        outer = self.x_vars() + self.family("rl", "rr") + outer_aux
        prefix = [("e", outer), ("a", self.y_vars()), ("e", self.family("rs") + inner_aux)]
        return Qbf(prefix, b.cnf()), vm

    def synthesis_base(self):
        """Supervisor validity and range control: the attacker-free part."""
        return conj(self.build_supervisor_constraints(), self.build_left_inclusion(), self.build_right_inclusion())


def describe_var(name, observations=None) -> str:
    kind = name[0]
    if kind == "t":
        _, i, ev, j = name
        return f"sup x{i} {ev} x{j}"
    if kind == "l":
        return f"loop x{name[1]} {name[2]}"
    if kind == "ta":
        obs = format_observation(observations[name[2]]) if observations else f"obs{name[2]}"
        return f"atk y{name[1]} {obs} y{name[3]}"
    if kind == "e":
        return f"enable y{name[1]} {name[2]}"
    if kind in ("rl", "rr"):
        return f"{'reach_left' if kind == 'rl' else 'reach_right'} x{name[1]} {name[2]} {name[3]}"
    if kind == "rs":
        _, c, k, i, q, w = name
        return f"reach_safe#{c} y{k} x{i} {q} {w}"
    if kind == "aux":
        return f"aux {name[1]}"
    raise FormulaError(f"unknown variable kind {kind!r}")


def emit_varmap(vm: VarMap, observations=None) -> str:
    return "".join(f"v {vid} {describe_var(name, observations)}\n" for vid, name in vm.items())
