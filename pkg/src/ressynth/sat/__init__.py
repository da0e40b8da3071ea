"""SAT backends.

The compiled CDCL kernel is used when the extension is importable; the
pure-Python port is the fallback (force it with ``RESSYNTH_PURE=1``).  Both
make identical decisions, so models do not depend on the backend.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from ..encoding.cnf import Cnf, emit_dimacs
from . import _cdcl_py
from .external import SolverError, SolverTimeout, parse_solver_output, run_external

_compiled = None
if os.environ.get("RESSYNTH_PURE", "") in ("", "0"):
    try:
        from . import _cdcl as _compiled
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def kernel(name: str | None = None):
    """The solve() function of the named backend (default: the selected one)."""
    name = name or BACKEND
    if name == "compiled":
        if _compiled is None:
            raise SolverError("compiled SAT kernel is not available")
        return _compiled.solve
    if name == "python":
        return _cdcl_py.solve
    raise SolverError(f"unknown backend {name!r}")


@dataclass(frozen=True)
class SolverConfig:
    backend: str | None = None  # "compiled", "python", or None for the default
    command: str | None = None  # external solver command line; overrides backend
    timeout: float | None = 60.0


@dataclass(frozen=True)
class SatResult:
    sat: bool
    model: list | None = None  # model[v - 1] is the value of DIMACS variable v
    conflicts: int = 0

    def value(self, vid: int) -> bool:
        return self.model[vid - 1]


def satisfies(cnf: Cnf, model) -> bool:
    return all(any(model[abs(l) - 1] == (l > 0) for l in c) for c in cnf.clauses)


def sat_solve(cnf: Cnf, config: SolverConfig | None = None) -> SatResult:
    config = config or SolverConfig()
    if config.command:
        sat, model = run_external(config.command, emit_dimacs(cnf), cnf.num_vars, config.timeout)
        if sat and not satisfies(cnf, model):
            raise SolverError("external solver returned an assignment that falsifies a clause")
        return SatResult(sat, model)
    status, model, conflicts = kernel(config.backend)(cnf.num_vars, cnf.clauses, config.timeout)
    if status == _cdcl_py.UNKNOWN:
        raise SolverTimeout(f"SAT search exceeded {config.timeout} s after {conflicts} conflicts")
    return SatResult(status == _cdcl_py.SAT, model, conflicts)


__all__ = ["BACKEND", "SatResult", "SolverConfig", "SolverError", "SolverTimeout", "kernel",
           "parse_solver_output", "sat_solve", "satisfies"]
