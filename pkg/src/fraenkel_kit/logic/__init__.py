from .families import (
    ChoiceInstance,
    beta_name,
    build_cell_formula,
    build_choice_instance,
    build_enum,
    build_LO,
    build_lo,
    build_pattern,
    build_po,
    build_swap,
    build_WO,
    build_wo,
    order_conjuncts,
    order_names,
)
from .parser import FormulaSyntaxError, parse, to_text
from .syntax import (
    And,
    ArityError,
    Eq,
    Exists,
    Forall,
    Formula,
    FormulaError,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
    conj,
    disj,
    exists,
    forall,
    is_individual,
    is_predicate,
    neq,
    pred,
    pred_arity,
    vec,
    vec_eq,
)
