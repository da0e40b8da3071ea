"""Deterministic partial finite automata.

States and events are opaque hashable names.  The declaration order of
``states`` and ``alphabet`` is significant: every downstream numbering
(variable ids, command indices) is derived from it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

State = Hashable
Event = str


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class Fsa:
    states: tuple
    alphabet: tuple
    trans: Mapping[tuple, State]
    initial: State
    marked: frozenset = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "trans", dict(self.trans))
        marked = self.states if self.marked is None else self.marked
        object.__setattr__(self, "marked", frozenset(marked))
        if len(set(self.states)) != len(self.states):
            raise AutomatonError("duplicate state names")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AutomatonError("duplicate event names")
        if self.initial not in self.states:
            raise AutomatonError(f"initial state {self.initial!r} not declared")
        if not self.marked <= set(self.states):
            raise AutomatonError("marked states must be declared states")
        known = set(self.states)
        events = set(self.alphabet)
        for (src, ev), dst in self.trans.items():
            if src not in known or dst not in known:
                raise AutomatonError(f"transition {src!r} -{ev}-> {dst!r} uses an undeclared state")
            if ev not in events:
                raise AutomatonError(f"transition on unknown event {ev!r}")

    def step(self, state: State, event: Event):
        """Successor of ``state`` on ``event``, or None when undefined."""
        return self.trans.get((state, event))

    def enabled(self, state: State) -> frozenset:
        return frozenset(e for e in self.alphabet if (state, e) in self.trans)

    def run(self, word: Iterable[Event]):
        state = self.initial
        for ev in word:
            state = self.trans.get((state, ev))
            if state is None:
                return None
        return state

    def accepts(self, word: Iterable[Event]) -> bool:
        """Membership in the closed (prefix) language."""
        return self.run(word) is not None

    def is_complete(self) -> bool:
        return all((q, e) in self.trans for q in self.states for e in self.alphabet)

    def successors(self, state: State):
        for ev in self.alphabet:
            nxt = self.trans.get((state, ev))
            if nxt is not None:
                yield ev, nxt


@dataclass(frozen=True)
class CompleteFsa(Fsa):
    dump: State = None


def fresh_name(base: str, taken: Iterable[State]) -> str:
    taken = set(taken)
    name = base
    k = 0
    while name in taken:
        k += 1
        name = f"{base}{k}"
    return name


def complete(p: Fsa, dump: State | None = None) -> CompleteFsa:
    """Totalise ``p`` with one fresh absorbing, unmarked dump state.

    The marked set of the result is the original state set, so the
    marked language of the completion is the closed language of ``p``.
    """
    if dump is None:
        dump = fresh_name("dump", p.states)
    elif dump in p.states:
        raise AutomatonError(f"dump state {dump!r} already in use")
    trans = dict(p.trans)
    for q in p.states:
        for ev in p.alphabet:
            trans.setdefault((q, ev), dump)
    for ev in p.alphabet:
        trans[(dump, ev)] = dump
    return CompleteFsa(
        states=p.states + (dump,),
        alphabet=p.alphabet,
        trans=trans,
        initial=p.initial,
        marked=frozenset(p.states),
        dump=dump,
    )


def sync_product(a: Fsa, b: Fsa) -> Fsa:
    """Synchronous product restricted to its reachable part.

    Shared events synchronise, private events interleave, and an
    undefined component blocks the move.
    """
    alphabet = a.alphabet + tuple(e for e in b.alphabet if e not in set(a.alphabet))
    in_a, in_b = set(a.alphabet), set(b.alphabet)
    init = (a.initial, b.initial)
    order = [init]
    seen = {init}
    trans = {}
    queue = deque([init])
    while queue:
        qa, qb = cur = queue.popleft()
        for ev in alphabet:
            na = a.trans.get((qa, ev)) if ev in in_a else qa
            nb = b.trans.get((qb, ev)) if ev in in_b else qb
            if na is None or nb is None:
                continue
            nxt = (na, nb)
            trans[(cur, ev)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    marked = frozenset(s for s in order if s[0] in a.marked and s[1] in b.marked)
    return Fsa(tuple(order), alphabet, trans, init, marked)


def reachable_states(f: Fsa) -> set:
    seen = {f.initial}
    stack = [f.initial]
    while stack:
        q = stack.pop()
        for _, nxt in f.successors(q):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def restrict_reachable(f: Fsa) -> Fsa:
    keep = reachable_states(f)
    states = tuple(q for q in f.states if q in keep)
    trans = {k: v for k, v in f.trans.items() if k[0] in keep}
    return Fsa(states, f.alphabet, trans, f.initial, f.marked & keep)


def check_language_inclusion(a: Fsa, b: Fsa) -> bool:
    """True iff the closed language of ``a`` is contained in that of ``b``."""
    if set(a.alphabet) != set(b.alphabet):
        raise AutomatonError("language inclusion needs a common alphabet")
    bc = complete(b)
    prod = sync_product(a, bc)
    return not any(qb == bc.dump for _, qb in prod.states)


def rename_states(f: Fsa, names: Sequence[State]) -> Fsa:
    """Rename states positionally (declaration order)."""
    if len(names) != len(f.states):
        raise AutomatonError("need one new name per state")
    m = dict(zip(f.states, names))
    trans = {(m[s], e): m[d] for (s, e), d in f.trans.items()}
    return Fsa(tuple(names), f.alphabet, trans, m[f.initial], frozenset(m[q] for q in f.marked))


def words(f: Fsa, max_len: int) -> set:
    """All strings of the closed language up to ``max_len`` events."""
    out = {()}
    frontier = [((), f.initial)]
    for _ in range(max_len):
        nxt = []
        for w, q in frontier:
            for ev, q2 in f.successors(q):
                w2 = w + (ev,)
                out.add(w2)
                nxt.append((w2, q2))
        frontier = nxt
    return out
