from .cnf import Cnf, CnfBuilder, Qbf, VarMap, emit_dimacs, emit_qdimacs, parse_dimacs, to_cnf
from .constraints import (
    EncodingError,
    Encoder,
    allocate_vars,
    attacker_assignment,
    describe_var,
    emit_varmap,
    supervisor_assignment,
)
from .formula import (
    FormulaError,
    conj,
    disj,
    eval_formula,
    iff,
    implies,
    neg,
    substitute,
    var,
    variables,
)
