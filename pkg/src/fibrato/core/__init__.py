from .category import (
    Collector,
    FinCat,
    FinFunctor,
    ValidationReport,
    Violation,
    check_category,
    check_functor,
    compose_functors,
    fiber_subcategory,
)
from .actions import CatValuedAction, SetValuedAction
from .constructions import (
    codiscrete_groupoid,
    connected_components,
    constant_functor,
    coproduct,
    discrete_category,
    functor_graph_category,
    inverse_of,
    is_groupoid,
    opposite,
    pair_name,
    poset_category,
    product,
    relabel,
    vertex_group,
)
from .iso import are_mutually_inverse, default_budget, find_isomorphism, inverse_functor, iter_isomorphisms
