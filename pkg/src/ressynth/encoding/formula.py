"""Propositional formulas as nested tuples.

    True / False                 constants
    ("v", name)                  variable; ``name`` is any hashable descriptor
    ("not", f)
    ("and", f1, ..., fk)         k >= 2
    ("or", f1, ..., fk)          k >= 2
    ("imp", a, b)
    ("iff", a, b)

Build formulas through the constructors below; they fold constants and
flatten nested conjunctions/disjunctions so structurally equal inputs
produce equal trees.
"""

from __future__ import annotations

from typing import Callable, Mapping


class FormulaError(ValueError):
    pass


def var(name):
    return ("v", name)


def neg(f):
    if f is True:
        return False
    if f is False:
        return True
    if f[0] == "not":
        return f[1]
    return ("not", f)


def _nary(op, unit, zero, fs):
    parts = []
    seen = set()
    for f in fs:
        if f is unit:
            continue
        if f is zero:
            return zero
        sub = f[1:] if f[0] == op else (f,)
        for g in sub:
            if g in seen:
                continue
            seen.add(g)
            parts.append(g)
    for g in parts:
        if neg(g) in seen:
            return zero
    if not parts:
        return unit
    if len(parts) == 1:
        return parts[0]
    return (op, *parts)


def conj(*fs):
    return _nary("and", True, False, fs)


def disj(*fs):
    return _nary("or", False, True, fs)


def conj_all(fs):
    return _nary("and", True, False, fs)


def disj_all(fs):
    return _nary("or", False, True, fs)


def implies(a, b):
    if a is False or b is True:
        return True
    if a is True:
        return b
    if b is False:
        return neg(a)
    if a == b:
        return True
    return ("imp", a, b)


def iff(a, b):
    if a is True:
        return b
    if a is False:
        return neg(b)
    if b is True:
        return a
    if b is False:
        return neg(a)
    if a == b:
        return True
    if neg(a) == b:
        return False
    return ("iff", a, b)


def eval_formula(f, assignment: Mapping) -> bool:
    """Truth value of ``f``; every variable must be assigned."""
    if f is True or f is False:
        return f
    op = f[0]
    if op == "v":
        try:
            return bool(assignment[f[1]])
        except KeyError:
            raise FormulaError(f"variable {f[1]!r} is unassigned") from None
    if op == "not":
        return not eval_formula(f[1], assignment)
    if op == "and":
        return all(eval_formula(g, assignment) for g in f[1:])
    if op == "or":
        return any(eval_formula(g, assignment) for g in f[1:])
    if op == "imp":
        return (not eval_formula(f[1], assignment)) or eval_formula(f[2], assignment)
    if op == "iff":
        return eval_formula(f[1], assignment) == eval_formula(f[2], assignment)
    raise FormulaError(f"unknown connective {op!r}")


def variables(f) -> set:
    out = set()
    stack = [f]
    done = set()
    while stack:
        g = stack.pop()
        if g is True or g is False or g in done:
            continue
        done.add(g)
        if g[0] == "v":
            out.add(g[1])
        else:
            stack.extend(g[1:])
    return out


_BUILD = {
    "not": lambda args: neg(args[0]),
    "and": lambda args: conj_all(args),
    "or": lambda args: disj_all(args),
    "imp": lambda args: implies(*args),
    "iff": lambda args: iff(*args),
}


def substitute(f, mapping: Mapping | Callable):
    """Replace variables by constants or renamed variables.

    ``mapping`` sends a descriptor to ``True``/``False``, to another
    descriptor (renaming), or omits it (left unchanged).  A callable
    returning ``None`` for untouched names works too.
    """
    lookup = mapping if callable(mapping) else mapping.get
    memo = {}

    def go(g):
        if g is True or g is False:
            return g
        hit = memo.get(g)
        if hit is not None:
            return hit
        if g[0] == "v":
            r = lookup(g[1])
            if r is None:
                out = g
            elif r is True or r is False:
                out = r
            else:
                out = ("v", r)
        else:
            out = _BUILD[g[0]]([go(a) for a in g[1:]])
        memo[g] = out
        return out

    return go(f)


def size(f) -> int:
    if f is True or f is False or f[0] == "v":
        return 1
    return 1 + sum(size(g) for g in f[1:])
