# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled CDCL search.  Step-for-step the same algorithm as ``_cdcl_py``."""

import time

from libcpp.vector cimport vector

SAT, UNSAT, UNKNOWN = 10, 20, 0

cdef double _DECAY = 1 / 0.95
cdef double _RESCALE = 1e100
cdef int _RESTART_UNIT = 100


cpdef long luby(long i):
    cdef long size = 1, seq = 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


cdef class _Solver:
    cdef int nvars
    cdef vector[signed char] val
    cdef vector[int] level
    cdef vector[int] reason
    cdef vector[int] phase
    cdef vector[double] act
    cdef vector[char] seen
    cdef vector[int] heap
    cdef vector[int] pos
    cdef vector[vector[int]] clauses
    cdef vector[vector[int]] watches
    cdef vector[int] trail
    cdef vector[int] lim
    cdef size_t qhead
    cdef double inc
    cdef public long conflicts

    def __init__(self, int nvars):
        self.nvars = nvars
        self.val.assign(2 * nvars, -1)
        self.level.assign(nvars, 0)
        self.reason.assign(nvars, -1)
        self.phase.assign(nvars, 1)
        self.act.assign(nvars, 0.0)
        self.seen.assign(nvars, 0)
        self.pos.assign(nvars, -1)
        self.watches.resize(2 * nvars)
        self.qhead = 0
        self.inc = 1.0
        self.conflicts = 0
        cdef int v
        for v in range(nvars):
            self._heap_insert(v)

    cdef void _up(self, int i):
        cdef int v = self.heap[i]
        cdef int parent
        while i > 0:
            parent = (i - 1) >> 1
            if self.act[v] > self.act[self.heap[parent]]:
                self.heap[i] = self.heap[parent]
                self.pos[self.heap[i]] = i
                i = parent
            else:
                break
        self.heap[i] = v
        self.pos[v] = i

    cdef void _down(self, int i):
        cdef int v = self.heap[i]
        cdef int size = <int>self.heap.size()
        cdef int child
        while True:
            child = 2 * i + 1
            if child >= size:
                break
            if child + 1 < size and self.act[self.heap[child + 1]] > self.act[self.heap[child]]:
                child += 1
            if self.act[self.heap[child]] > self.act[v]:
                self.heap[i] = self.heap[child]
                self.pos[self.heap[i]] = i
                i = child
            else:
                break
        self.heap[i] = v
        self.pos[v] = i

    cdef void _heap_insert(self, int v):
        if self.pos[v] >= 0:
            return
        self.heap.push_back(v)
        self.pos[v] = <int>self.heap.size() - 1
        self._up(<int>self.heap.size() - 1)

    cdef int _heap_pop(self):
        cdef int top = self.heap[0]
        cdef int last = self.heap.back()
        self.heap.pop_back()
        self.pos[top] = -1
        if self.heap.size() > 0:
            self.heap[0] = last
            self.pos[last] = 0
            self._down(0)
        return top

    cdef void _bump(self, int v):
        cdef int u
        self.act[v] += self.inc
        if self.act[v] > _RESCALE:
            for u in range(self.nvars):
                self.act[u] *= 1e-100
            self.inc *= 1e-100
        if self.pos[v] >= 0:
            self._up(self.pos[v])

    cdef void _assign(self, int lit, int reason):
        cdef int v = lit >> 1
        self.val[lit] = 1
        self.val[lit ^ 1] = 0
        self.level[v] = <int>self.lim.size()
        self.reason[v] = reason
        self.trail.push_back(lit)

    cdef void _attach(self, vector[int]& c):
        cdef int ci = <int>self.clauses.size()
        self.clauses.push_back(c)
        self.watches[c[0]].push_back(ci)
        self.watches[c[1]].push_back(ci)

    cdef bint add_clause(self, vector[int]& lits):
        cdef vector[int] out
        cdef int lit, o
        cdef bint dup, taut
        for lit in lits:
            if self.val[lit] == 1:
                return True
            taut = False
            dup = False
            for o in out:
                if o == (lit ^ 1):
                    taut = True
                elif o == lit:
                    dup = True
            if taut:
                return True
            if self.val[lit] == 0 or dup:
                continue
            out.push_back(lit)
        if out.size() == 0:
            return False
        if out.size() == 1:
            self._assign(out[0], -1)
            return True
        self._attach(out)
        return True

    cdef int propagate(self):
        cdef int false_lit, ci, first, k, tmp
        cdef size_t i, j, end
        cdef bint found
        while self.qhead < self.trail.size():
            false_lit = self.trail[self.qhead] ^ 1
            self.qhead += 1
            i = 0
            j = 0
            end = self.watches[false_lit].size()
            while i < end:
                ci = self.watches[false_lit][i]
                i += 1
                if self.clauses[ci][0] == false_lit:
                    self.clauses[ci][0] = self.clauses[ci][1]
                    self.clauses[ci][1] = false_lit
                first = self.clauses[ci][0]
                if self.val[first] == 1:
                    self.watches[false_lit][j] = ci
                    j += 1
                    continue
                found = False
                for k in range(2, <int>self.clauses[ci].size()):
                    tmp = self.clauses[ci][k]
                    if self.val[tmp] != 0:
                        self.clauses[ci][1] = tmp
                        self.clauses[ci][k] = false_lit
                        self.watches[tmp].push_back(ci)
                        found = True
                        break
                if found:
                    continue
                self.watches[false_lit][j] = ci
                j += 1
                if self.val[first] == 0:
                    while i < end:
                        self.watches[false_lit][j] = self.watches[false_lit][i]
                        j += 1
                        i += 1
                    self.watches[false_lit].resize(j)
                    self.qhead = self.trail.size()
                    return ci
                self._assign(first, ci)
            self.watches[false_lit].resize(j)
        return -1

    cdef int analyze(self, int confl, vector[int]& learnt):
        cdef int cur = <int>self.lim.size()
        cdef int pending = 0
        cdef int p = -1
        cdef int idx = <int>self.trail.size() - 1
        cdef int k, q, v, best, tmp
        learnt.clear()
        learnt.push_back(0)
        while True:
            for k in range(0 if p < 0 else 1, <int>self.clauses[confl].size()):
                q = self.clauses[confl][k]
                v = q >> 1
                if not self.seen[v] and self.level[v] > 0:
                    self.seen[v] = 1
                    self._bump(v)
                    if self.level[v] >= cur:
                        pending += 1
                    else:
                        learnt.push_back(q)
            while not self.seen[self.trail[idx] >> 1]:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            confl = self.reason[p >> 1]
            self.seen[p >> 1] = 0
            pending -= 1
            if pending == 0:
                break
        learnt[0] = p ^ 1
        for k in range(1, <int>learnt.size()):
            self.seen[learnt[k] >> 1] = 0
        if learnt.size() == 1:
            return 0
        best = 1
        for k in range(2, <int>learnt.size()):
            if self.level[learnt[k] >> 1] > self.level[learnt[best] >> 1]:
                best = k
        tmp = learnt[1]
        learnt[1] = learnt[best]
        learnt[best] = tmp
        return self.level[learnt[1] >> 1]

    cdef void backtrack(self, int lvl):
        if <int>self.lim.size() <= lvl:
            return
        cdef int stop = self.lim[lvl]
        cdef int k, lit, v
        for k in range(<int>self.trail.size() - 1, stop - 1, -1):
            lit = self.trail[k]
            v = lit >> 1
            self.val[lit] = -1
            self.val[lit ^ 1] = -1
            self.phase[v] = lit & 1
            self.reason[v] = -1
            self._heap_insert(v)
        self.trail.resize(stop)
        self.lim.resize(lvl)
        self.qhead = self.trail.size()

    cdef int pick(self):
        cdef int v
        while self.heap.size() > 0:
            v = self._heap_pop()
            if self.val[2 * v] == -1:
                return 2 * v + self.phase[v]
        return -1

    cdef int search(self, double deadline, bint timed):
        cdef vector[int] learnt
        cdef int confl, back, lit
        cdef long restarts = 0, since = 0, budget
        if self.propagate() >= 0:
            return UNSAT
        budget = luby(0) * _RESTART_UNIT
        while True:
            confl = self.propagate()
            if confl >= 0:
                self.conflicts += 1
                since += 1
                if self.lim.size() == 0:
                    return UNSAT
                back = self.analyze(confl, learnt)
                self.backtrack(back)
                if learnt.size() == 1:
                    self._assign(learnt[0], -1)
                else:
                    self._attach(learnt)
                    self._assign(learnt[0], <int>self.clauses.size() - 1)
                self.inc *= _DECAY
                if timed and self.conflicts % 128 == 0 and time.monotonic() > deadline:
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
            self.lim.push_back(<int>self.trail.size())
            self._assign(lit, -1)

    def run(self, clauses, time_limit):
        cdef vector[int] lits
        cdef int x
        for c in clauses:
            lits.clear()
            for x in c:
                if not 0 < abs(x) <= self.nvars:
                    raise ValueError(f"literal {x} out of range for {self.nvars} variables")
                lits.push_back(2 * (-x - 1) + 1 if x < 0 else 2 * (x - 1))
            if not self.add_clause(lits):
                return UNSAT
        if time_limit is None:
            return self.search(0.0, False)
        return self.search(time.monotonic() + time_limit, True)

    def model(self):
        return [self.val[2 * v] == 1 for v in range(self.nvars)]


def solve(nvars, clauses, time_limit=None):
    """Same contract as the pure-Python ``solve``."""
    s = _Solver(nvars)
    status = s.run(clauses, time_limit)
    if status == SAT:
        return SAT, s.model(), s.conflicts
    return status, None, s.conflicts
