"""Variable numbering, Tseitin conversion and (Q)DIMACS text."""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import FormulaError, disj_all, neg


class VarMap:
    """Dense 1-based numbering of variable descriptors, in allocation order."""

    def __init__(self):
        self._ids: dict = {}
        self._names: list = [None]

    def add(self, name) -> int:
        if name in self._ids:
            raise FormulaError(f"variable {name!r} allocated twice")
        self._ids[name] = len(self._names)
        self._names.append(name)
        return self._ids[name]

    def get_or_add(self, name) -> int:
        vid = self._ids.get(name)
        return vid if vid is not None else self.add(name)

    def id(self, name) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise FormulaError(f"variable {name!r} was never allocated") from None

    def name(self, vid: int):
        return self._names[vid]

    def __contains__(self, name):
        return name in self._ids

    def __len__(self):
        return len(self._names) - 1

    def items(self):
        return ((i, n) for i, n in enumerate(self._names) if i)

    def copy(self) -> "VarMap":
        out = VarMap()
        out._ids = dict(self._ids)
        out._names = list(self._names)
        return out


@dataclass
class Cnf:
    num_vars: int
    clauses: list = field(default_factory=list)


def normalize_clause(lits):
    """Drop duplicate literals; None for a tautology."""
    out = []
    seen = set()
    for lit in lits:
        if -lit in seen:
            return None
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


class CnfBuilder:
    """Incremental CNF conversion sharing Tseitin definitions across calls.

    Top-level conjunctions are split and clause-shaped parts go in
    directly; every other subformula gets a fully defined auxiliary
    variable (both implication directions), which keeps the result valid
    under any quantifier prefix that places auxiliaries innermost.
    """

    def __init__(self, varmap: VarMap, extend: bool = False):
        self.varmap = varmap
        self.extend = extend  # allocate unknown variables on first use
        self.clauses: list = []
        self.aux: list = []
        self._cache: dict = {}
        self._aux_count = 0

    def _fresh(self) -> int:
        while True:
            self._aux_count += 1
            name = ("aux", self._aux_count)
            if name not in self.varmap:
                break
        vid = self.varmap.add(name)
        self.aux.append(vid)
        return vid

    def _var(self, name) -> int:
        if self.extend:
            return self.varmap.get_or_add(name)
        return self.varmap.id(name)

    def _emit(self, lits):
        c = normalize_clause(lits)
        if c is not None:
            self.clauses.append(c)

    def add(self, f):
        stack = [f]
        while stack:
            g = stack.pop()
            if g is True:
                continue
            if g is False:
                self.clauses.append(())
                continue
            if g[0] == "and":
                stack.extend(reversed(g[1:]))
                continue
            if g[0] == "not" and g[1] is not True and g[1] is not False and g[1][0] == "or":
                stack.extend(reversed([neg(h) for h in g[1][1:]]))
                continue
            lits = self._clause(g, True)
            if lits is not None:
                self._emit(lits)

    def _clause(self, g, positive):
        """Literal list of a clause-shaped formula, None when trivially true."""
        if g is True or g is False:
            return None if g is positive else []
        op = g[0]
        if op == "v":
            vid = self._var(g[1])
            return [vid if positive else -vid]
        if op == "not":
            return self._clause(g[1], not positive)
        if (op == "or" and positive) or (op == "and" and not positive):
            out = []
            for h in g[1:]:
                part = self._clause(h, positive)
                if part is None:
                    return None
                out.extend(part)
            return out
        if op == "imp" and positive:
            left = self._clause(g[1], False)
            if left is None:
                return None
            right = self._clause(g[2], True)
            if right is None:
                return None
            return left + right
        lit = self.lit(g)
        return [lit if positive else -lit]

    def lit(self, g) -> int:
        if g is True or g is False:
            t = self._cache.get(True)
            if t is None:
                t = self._fresh()
                self._cache[True] = t
                self.clauses.append((t,))
            return t if g is True else -t
        op = g[0]
        if op == "v":
            return self._var(g[1])
        if op == "not":
            return -self.lit(g[1])
        hit = self._cache.get(g)
        if hit is not None:
            return hit
        if op == "imp":
            a = self.lit(disj_all([neg(g[1]), g[2]]))
            self._cache[g] = a
            return a
        if op == "iff":
            x, y = self.lit(g[1]), self.lit(g[2])
            a = self._fresh()
            self._emit((-a, -x, y))
            self._emit((-a, x, -y))
            self._emit((a, x, y))
            self._emit((a, -x, -y))
        elif op in ("and", "or"):
            kids = [self.lit(h) for h in g[1:]]
            a = self._fresh()
            if op == "and":
                for k in kids:
                    self._emit((-a, k))
                self._emit([a] + [-k for k in kids])
            else:
                for k in kids:
                    self._emit((a, -k))
                self._emit([-a] + kids)
        else:
            raise FormulaError(f"unknown connective {op!r}")
        self._cache[g] = a
        return a

    def cnf(self) -> Cnf:
        return Cnf(len(self.varmap), list(self.clauses))


def to_cnf(f, varmap: VarMap) -> Cnf:
    """Equisatisfiable CNF; models restrict to models of ``f``.

    New auxiliary variables are appended to ``varmap``.
    """
    b = CnfBuilder(varmap)
    b.add(f)
    return b.cnf()


@dataclass
class Qbf:
    prefix: list  # [("e" | "a", [var ids])], outermost first
    matrix: Cnf


def emit_dimacs(cnf: Cnf) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    lines.extend(" ".join(map(str, c)) + " 0" if c else "0" for c in cnf.clauses)
    return "\n".join(lines) + "\n"


def emit_qdimacs(qbf: Qbf) -> str:
    lines = [f"p cnf {qbf.matrix.num_vars} {len(qbf.matrix.clauses)}"]
    for quant, block in qbf.prefix:
        if block:
            lines.append(f"{quant} " + " ".join(map(str, block)) + " 0")
    lines.extend(" ".join(map(str, c)) + " 0" if c else "0" for c in qbf.matrix.clauses)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Cnf:
    num_vars = 0
    clauses = []
    cur = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line[0] in "c%":
            continue
        if line.startswith("p"):
            parts = line.split()
            num_vars = int(parts[2])
            continue
        if line[0] in "ae":
            continue
        for tok in line.split():
            v = int(tok)
            if v == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(v)
    if cur:
        clauses.append(tuple(cur))
    return Cnf(num_vars, clauses)
