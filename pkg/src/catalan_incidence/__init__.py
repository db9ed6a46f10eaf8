"""Exact computations with the Catalan monoid and the incidence algebra of P_n."""

from .algebra import (
    AlgebraElement,
    Basis,
    add_elements,
    basis_element,
    incidence_identity,
    incidence_product,
    monoid_basis,
    monoid_identity,
    monoid_product,
    pair_basis,
    scale,
)
from .catalan import (
    CMap,
    compose,
    enumerate_monoid,
    from_pair,
    identity,
    image_of_set,
    is_pcs,
    make_cmap,
    pcs,
    to_pair,
)
from .errors import CatalanError, DomainError, ResourceError, UsageError, ValidationError
from .iso import RingMatrix, invert_unipotent, phi, phi_basis, phi_inverse, phi_matrix
from .posets import PosetPair, Subset, enumerate_pairs, leq, linext_key, preceq
from .rings import INTEGERS, RATIONALS, RingSpec, integers_mod, ring_add, ring_mul, ring_neg

__version__ = "0.1.0"
