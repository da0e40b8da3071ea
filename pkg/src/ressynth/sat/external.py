"""Run a third-party SAT solver speaking DIMACS on stdin."""

from __future__ import annotations

import shlex
import subprocess


class SolverError(RuntimeError):
    """The solver failed to produce a verdict (crash, garbage, bad exit)."""


class SolverTimeout(SolverError):
    pass


def parse_solver_output(text: str, num_vars: int):
    """(sat, model) from competition-format output; model is a bool list."""
    status = None
    values = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip().upper()
            if word == "SATISFIABLE":
                status = True
            elif word == "UNSATISFIABLE":
                status = False
            else:
                raise SolverError(f"solver answered {word!r}")
        elif line.startswith("v "):
            for tok in line[2:].split():
                lit = int(tok)
                if lit:
                    values[abs(lit)] = lit > 0
    if status is None:
        raise SolverError("solver printed no status line")
    if not status:
        return False, None
    # unmentioned variables are don't-cares
    return True, [values.get(v, False) for v in range(1, num_vars + 1)]


def run_external(command, dimacs: str, num_vars: int, timeout: float | None):
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    try:
        proc = subprocess.run(argv, input=dimacs, capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        raise SolverTimeout(f"external solver exceeded {timeout} s") from None
    except OSError as exc:
        raise SolverError(f"cannot start external solver: {exc}") from None
    if proc.returncode not in (0, 10, 20):
        raise SolverError(f"external solver exited with code {proc.returncode}: {proc.stderr.strip()[:200]}")
    sat, model = parse_solver_output(proc.stdout, num_vars)
    if proc.returncode == 10 and not sat or proc.returncode == 20 and sat:
        raise SolverError("exit code contradicts the status line")
    return sat, model
