"""Polynomial functors on free modules: Lie, restricted Lie, exterior and tensor powers."""

from .apply import apply_on_morphism, apply_on_object, exterior_power_matrix, functor_labels, wedge_columns
from .expr import (
    Compose,
    DirectSum,
    ExteriorPower,
    FunctorExpr,
    Id,
    LiePower,
    RestrictedLiePower,
    Tensor,
    TensorPower,
    to_text,
)
from .lie import (
    LieBasis,
    LieBasisElement,
    NotInSpan,
    RestrictedBasisElement,
    TensorVectors,
    UnsupportedRing,
    lie_basis,
    lie_basis_cached,
    restricted_lie_basis,
)
from .modules import BasedModule, Letter, LieLabel, PowerLabel, SummandLabel, TensorLabel, WedgeLabel
from .words import is_lyndon, lyndon_words, mobius, standard_bracketing, standard_factorization, witt_dimension

__all__ = [
    "BasedModule",
    "Compose",
    "DirectSum",
    "ExteriorPower",
    "FunctorExpr",
    "Id",
    "Letter",
    "LieBasis",
    "LieBasisElement",
    "LieLabel",
    "LiePower",
    "NotInSpan",
    "PowerLabel",
    "RestrictedBasisElement",
    "RestrictedLiePower",
    "SummandLabel",
    "Tensor",
    "TensorLabel",
    "TensorPower",
    "TensorVectors",
    "UnsupportedRing",
    "WedgeLabel",
    "apply_on_morphism",
    "apply_on_object",
    "exterior_power_matrix",
    "functor_labels",
    "is_lyndon",
    "lie_basis",
    "lie_basis_cached",
    "lyndon_words",
    "mobius",
    "restricted_lie_basis",
    "standard_bracketing",
    "standard_factorization",
    "to_text",
    "wedge_columns",
    "witt_dimension",
]
