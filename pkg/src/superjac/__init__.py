"""Exact arithmetic in polynomial superalgebras F[x_1..x_m; xi_1..xi_n] and
inversion of endomorphisms of the affine superspace A^{m|n}."""

from .calculus import JacobianPair, SJVerdict, check_sj, d_dx, d_dxi, det_even, jacobian_pair, tangent_check
from .errors import (
    ContextMismatchError,
    FieldMismatchError,
    InternalVerificationError,
    ParityError,
    ParseError,
    PreconditionError,
    SuperJacError,
)
from .fields import QQ, FieldSpec, Scalar, scalar_arith
from .inversion import (
    Automorphism,
    Inconclusive,
    NotAutomorphism,
    Reason,
    build_theta,
    invert_classical,
    invert_full,
    probe_upsilon_power,
    unipotent_invert,
)
from .morphism import (
    LinearParts,
    SuperEndomorphism,
    apply,
    compose,
    identity_map,
    linear_parts,
    make_elementary,
    random_tame,
)
from .pointcheck import exhaustive_bijectivity, point_map, sample_injectivity
from .poly import (
    Parity,
    RingContext,
    SuperMonomial,
    SuperPolynomial,
    evaluate_at_point,
    is_unit,
    j_degree,
    parity_of,
    poly_add,
    poly_mul,
    reduce_mod_j,
)
from .textio import deserialize, parse_map, parse_poly, print_canonical, print_map, serialize

__version__ = "0.1.0"

__all__ = [
    "Automorphism",
    "ContextMismatchError",
    "FieldMismatchError",
    "FieldSpec",
    "Inconclusive",
    "InternalVerificationError",
    "JacobianPair",
    "LinearParts",
    "NotAutomorphism",
    "Parity",
    "ParityError",
    "ParseError",
    "PreconditionError",
    "QQ",
    "Reason",
    "RingContext",
    "SJVerdict",
    "Scalar",
    "SuperEndomorphism",
    "SuperJacError",
    "SuperMonomial",
    "SuperPolynomial",
    "apply",
    "build_theta",
    "check_sj",
    "compose",
    "d_dx",
    "d_dxi",
    "deserialize",
    "det_even",
    "evaluate_at_point",
    "exhaustive_bijectivity",
    "identity_map",
    "invert_classical",
    "invert_full",
    "is_unit",
    "j_degree",
    "jacobian_pair",
    "linear_parts",
    "make_elementary",
    "parity_of",
    "parse_map",
    "parse_poly",
    "point_map",
    "poly_add",
    "poly_mul",
    "print_canonical",
    "print_map",
    "probe_upsilon_power",
    "random_tame",
    "reduce_mod_j",
    "sample_injectivity",
    "scalar_arith",
    "serialize",
    "tangent_check",
    "unipotent_invert",
]
