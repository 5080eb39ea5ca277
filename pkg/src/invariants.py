"""Projective dimension, codimension and Cohen-Macaulayness of principal
Q-Borel ideals."""
import logging
from dataclasses import dataclass

from src.errors import PreconditionError, ensure
from src.monomials import Monomial
from src.poset import Poset, connected_components, down_set
from src.qborel import max_stabilizing_poset, principal

logger = logging.getLogger(__name__)

PRIME_POWER = "prime power"
PRINCIPAL = "principal"
NOT_CM = "not Cohen-Macaulay"


@dataclass(frozen=True)
class CMClassification:
    is_cm: bool
    case: str


def check_pdim_hypotheses(Q: Poset, m: Monomial) -> None:
    """Raise unless Q is maximal stabilizing for Q(m) and every maximal
    element of Q divides m."""
    if m.is_unit():
        raise PreconditionError("m must not be 1")
    if max_stabilizing_poset(principal(Q, m).expansion) != Q:
        raise PreconditionError("Q not maximal stabilizing")
    for i in Q.maximal_elements():
        if not m.exponents[i]:
            raise PreconditionError(
                f"hypotheses violated: maximal element x{i + 1} "
                f"does not divide m"
            )


def pdim_principal(Q: Poset, m: Monomial) -> int:
    """pd(S/Q(m)) = n - #connected components of Q + 1."""
    check_pdim_hypotheses(Q, m)
    return Q.n - len(connected_components(Q)) + 1


def codim_principal(Q: Poset, m: Monomial) -> int:
    """Smallest |A(x_i)| over the variables dividing m."""
    if m.is_unit():
        raise PreconditionError("m must not be 1")
    return min(len(down_set(Q, [i]).support) for i in m.support)


def is_cohen_macaulay(Q: Poset, m: Monomial) -> CMClassification:
    """Classify S/Q(m): Cohen-Macaulay iff m is a pure power or Q(m) is
    principal as a monomial ideal."""
    if m.is_unit():
        raise PreconditionError("m must not be 1")
    if len(m.support) == 1:
        result = CMClassification(True, PRIME_POWER)
    elif len(principal(Q, m).expansion.generators) == 1:
        result = CMClassification(True, PRINCIPAL)
    else:
        result = CMClassification(False, NOT_CM)
    try:
        check_pdim_hypotheses(Q, m)
    except PreconditionError:
        logger.debug("Projective dimension hypotheses fail; skipping check")
    else:
        ensure(
            lambda: (pdim_principal(Q, m) == codim_principal(Q, m))
            == result.is_cm,
            "classification disagrees with pd = codim"
        )
    return result
