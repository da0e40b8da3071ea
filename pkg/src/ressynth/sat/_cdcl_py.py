"""Pure-Python CDCL search, the fallback for the compiled kernel.

Both implementations follow the same steps (two watched literals, first-UIP
learning, VSIDS with an indexed binary heap, phase saving, Luby restarts),
so on the same input they make the same decisions and return the same model.

Internal literals are ``2 * v + s`` for the 0-based variable ``v`` and sign
bit ``s`` (1 for negation).
"""

import time

SAT, UNSAT, UNKNOWN = 10, 20, 0

_DECAY = 1 / 0.95
_RESCALE = 1e100
_RESTART_UNIT = 100


def luby(i: int) -> int:
    """The ``i``-th term (0-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class _Solver:
    def __init__(self, nvars):
        self.nvars = nvars
        self.val = [-1] * (2 * nvars)  # per literal: 1 true, 0 false, -1 free
        self.level = [0] * nvars
        self.reason = [-1] * nvars
        self.phase = [1] * nvars  # saved sign bit; 1 = try negative first
        self.act = [0.0] * nvars
        self.seen = [False] * nvars
        self.heap = []
        self.pos = [-1] * nvars
        self.clauses = []
        self.watches = [[] for _ in range(2 * nvars)]
        self.trail = []
        self.lim = []
        self.qhead = 0
        self.inc = 1.0
        self.conflicts = 0
        for v in range(nvars):
            self._heap_insert(v)

    # heap ordered by activity, max at the root
    def _up(self, i):
        heap, pos, act = self.heap, self.pos, self.act
        v = heap[i]
        while i > 0:
            parent = (i - 1) >> 1
            if act[v] > act[heap[parent]]:
                heap[i] = heap[parent]
                pos[heap[i]] = i
                i = parent
            else:
                break
        heap[i] = v
        pos[v] = i

    def _down(self, i):
        heap, pos, act = self.heap, self.pos, self.act
        v = heap[i]
        size = len(heap)
        while True:
            child = 2 * i + 1
            if child >= size:
                break
            if child + 1 < size and act[heap[child + 1]] > act[heap[child]]:
                child += 1
            if act[heap[child]] > act[v]:
                heap[i] = heap[child]
                pos[heap[i]] = i
                i = child
            else:
                break
        heap[i] = v
        pos[v] = i

    def _heap_insert(self, v):
        if self.pos[v] >= 0:
            return
        self.heap.append(v)
        self.pos[v] = len(self.heap) - 1
        self._up(len(self.heap) - 1)

    def _heap_pop(self):
        heap, pos = self.heap, self.pos
        top = heap[0]
        last = heap.pop()
        pos[top] = -1
        if heap:
            heap[0] = last
            pos[last] = 0
            self._down(0)
        return top

    def _bump(self, v):
        act = self.act
        act[v] += self.inc
        if act[v] > _RESCALE:
            for u in range(self.nvars):
                act[u] *= 1e-100
            self.inc *= 1e-100
        if self.pos[v] >= 0:
            self._up(self.pos[v])

    def _assign(self, lit, reason):
        v = lit >> 1
        self.val[lit] = 1
        self.val[lit ^ 1] = 0
        self.level[v] = len(self.lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def add_clause(self, lits):
        """Add an input clause at level 0.  Returns False on a trivial conflict."""
        val = self.val
        out = []
        for lit in lits:
            if val[lit] == 1 or (lit ^ 1) in out:
                return True
            if val[lit] == 0 or lit in out:
                continue
            out.append(lit)
        if not out:
            return False
        if len(out) == 1:
            self._assign(out[0], -1)
            return True
        ci = len(self.clauses)
        self.clauses.append(out)
        self.watches[out[0]].append(ci)
        self.watches[out[1]].append(ci)
        return True

    def propagate(self):
        val, clauses, watches, trail = self.val, self.clauses, self.watches, self.trail
        while self.qhead < len(trail):
            false_lit = trail[self.qhead] ^ 1
            self.qhead += 1
            ws = watches[false_lit]
            i = j = 0
            end = len(ws)
            while i < end:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if val[first] == 1:
                    ws[j] = ci
                    j += 1
                    continue
                found = False
                for k in range(2, len(c)):
                    if val[c[k]] != 0:
                        c[1] = c[k]
                        c[k] = false_lit
                        watches[c[1]].append(ci)
                        found = True
                        break
                if found:
                    continue
                ws[j] = ci
                j += 1
                if val[first] == 0:
                    while i < end:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self.qhead = len(trail)
                    return ci
                self._assign(first, ci)
            del ws[j:]
        return -1

    def analyze(self, confl):
        seen, level, reason, trail = self.seen, self.level, self.reason, self.trail
        cur = len(self.lim)
        learnt = [0]
        pending = 0
        p = -1
        idx = len(trail) - 1
        while True:
            c = self.clauses[confl]
            for k in range(0 if p < 0 else 1, len(c)):
                q = c[k]
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if level[v] >= cur:
                        pending += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            confl = reason[p >> 1]
            seen[p >> 1] = False
            pending -= 1
            if pending == 0:
                break
        learnt[0] = p ^ 1
        for q in learnt[1:]:
            seen[q >> 1] = False
        back = 0
        if len(learnt) > 1:
            best = 1
            for k in range(2, len(learnt)):
                if level[learnt[k] >> 1] > level[learnt[best] >> 1]:
                    best = k
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = level[learnt[1] >> 1]
        return learnt, back

    def backtrack(self, lvl):
        if len(self.lim) <= lvl:
            return
        val, trail, phase = self.val, self.trail, self.phase
        stop = self.lim[lvl]
        for k in range(len(trail) - 1, stop - 1, -1):
            lit = trail[k]
            v = lit >> 1
            val[lit] = -1
            val[lit ^ 1] = -1
            phase[v] = lit & 1
            self.reason[v] = -1
            self._heap_insert(v)
        del trail[stop:]
        del self.lim[lvl:]
        self.qhead = len(trail)

    def pick(self):
        val = self.val
        while self.heap:
            v = self._heap_pop()
            if val[2 * v] == -1:
                return 2 * v + self.phase[v]
        return -1

    def search(self, deadline):
        if self.propagate() >= 0:
            return UNSAT
        restarts = 0
        budget = luby(0) * _RESTART_UNIT
        since = 0
        while True:
            confl = self.propagate()
            if confl >= 0:
                self.conflicts += 1
                since += 1
                if not self.lim:
                    return UNSAT
                learnt, back = self.analyze(confl)
                self.backtrack(back)
                if len(learnt) == 1:
                    self._assign(learnt[0], -1)
                else:
                    ci = len(self.clauses)
                    self.clauses.append(learnt)
                    self.watches[learnt[0]].append(ci)
                    self.watches[learnt[1]].append(ci)
                    self._assign(learnt[0], ci)
                self.inc *= _DECAY
                if deadline is not None and self.conflicts % 128 == 0 and time.monotonic() > deadline:
                    return UNKNOWN
                continue
            if since >= budget:
                restarts += 1
                budget = luby(restarts) * _RESTART_UNIT
                since = 0
                self.backtrack(0)
                continue
            lit = self.pick()
            if lit < 0:
                return SAT
            self.lim.append(len(self.trail))
            self._assign(lit, -1)

    def model(self):
        return [self.val[2 * v] == 1 for v in range(self.nvars)]


def solve(nvars, clauses, time_limit=None):
    """Decide satisfiability of DIMACS-style ``clauses`` over ``nvars`` variables.

    Returns ``(status, model, conflicts)`` where status is SAT, UNSAT or
    UNKNOWN (time limit hit) and model lists one bool per variable.
    """
    deadline = None if time_limit is None else time.monotonic() + time_limit
    s = _Solver(nvars)
    for c in clauses:
        lits = [2 * (-x - 1) + 1 if x < 0 else 2 * (x - 1) for x in c]
        for x in c:
            if not 0 < abs(x) <= nvars:
                raise ValueError(f"literal {x} out of range for {nvars} variables")
        if not s.add_clause(lits):
            return UNSAT, None, 0
    status = s.search(deadline)
    if status == SAT:
        return SAT, s.model(), s.conflicts
    return status, None, s.conflicts
