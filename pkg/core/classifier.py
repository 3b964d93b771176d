"""
Detection Classifier
Maps a group of squarefree order to its (DRR-detecting, GRR-detecting) verdict
and the branch of the classification that decides it.
"""

import logging
from dataclasses import dataclass
from enum import Enum

from sympy import isprime, primefactors

from core.errors import CertificateError, HypothesisFailed, NotPrime
from core.squarefree_group import SquarefreeGroup, SubgroupHandle

logger = logging.getLogger(__name__)


class Clause(str, Enum):
    PRIME = '1'
    SPORADIC_PAIR = '2a-i'
    SAFE_PAIR = '2a-ii'
    ABELIAN_TWO_PRIMES = '2b-i'
    F21 = '2b-ii'
    TWO_PRIMES_DETECTING = '2c'
    NOT_GRR_DETECTING = '3-not-GRR'
    ABELIAN = '3a'
    D30 = '3b'
    CQ_DIHEDRAL = '3c'


CITATIONS = {
    Clause.PRIME: "|R| prime: DRR-detecting",
    Clause.SPORADIC_PAIR: "C_q:C_r with (q,r) = (31,5): not GRR-detecting",
    Clause.SAFE_PAIR: "C_q:C_r, q = 2r+1 safe prime, q = 3 mod 4, q >= 11: not GRR-detecting",
    Clause.ABELIAN_TWO_PRIMES: "abelian, two primes: GRR-detecting, not DRR-detecting",
    Clause.F21: "C7:C3: GRR-detecting, not DRR-detecting",
    Clause.TWO_PRIMES_DETECTING: "two primes, no exception applies: DRR-detecting",
    Clause.NOT_GRR_DETECTING: "three or more primes, not in the GRR-detecting list: neither",
    Clause.ABELIAN: "abelian, three or more primes: GRR-detecting, not DRR-detecting",
    Clause.D30: "D30: GRR-detecting, not DRR-detecting",
    Clause.CQ_DIHEDRAL: "C_q x D_2r with r in {3,5}: GRR-detecting, not DRR-detecting",
}

_VERDICTS = {
    Clause.PRIME: (True, True),
    Clause.SPORADIC_PAIR: (False, False),
    Clause.SAFE_PAIR: (False, False),
    Clause.ABELIAN_TWO_PRIMES: (False, True),
    Clause.F21: (False, True),
    Clause.TWO_PRIMES_DETECTING: (True, True),
    Clause.NOT_GRR_DETECTING: (False, False),
    Clause.ABELIAN: (False, True),
    Clause.D30: (False, True),
    Clause.CQ_DIHEDRAL: (False, True),
}


@dataclass(frozen=True)
class DetectionVerdict:
    group: str
    group_name: str
    drr_detecting: bool
    grr_detecting: bool
    clause: Clause

    def __post_init__(self):
        if self.drr_detecting and not self.grr_detecting:
            raise CertificateError("DRR-detecting verdict that is not GRR-detecting")
        if _VERDICTS[self.clause] != (self.drr_detecting, self.grr_detecting):
            raise CertificateError(f"clause {self.clause.value} disagrees with the verdict")

    @property
    def citation(self) -> str:
        return CITATIONS[self.clause]

    def to_dict(self):
        return {
            'group': self.group,
            'name': self.group_name,
            'drr_detecting': self.drr_detecting,
            'grr_detecting': self.grr_detecting,
            'clause': self.clause.value,
            'citation': self.citation,
        }


def is_safe_sophie_pair(q: int, r: int) -> bool:
    """
    q = 2r + 1 with both prime

    Raises:
        NotPrime
    """
    for value in (q, r):
        if not isprime(value):
            raise NotPrime(f"{value} is not prime", value=value)
    return q == 2 * r + 1


def _verdict(R: SquarefreeGroup, clause: Clause) -> DetectionVerdict:
    drr, grr = _VERDICTS[clause]
    return DetectionVerdict(R.literal, R.describe(), drr, grr, clause)


def _is_cq_dihedral(R: SquarefreeGroup) -> bool:
    return R.m == 2 and R.n in (3, 5) and len(primefactors(R.t)) == 1


def classify(R: SquarefreeGroup) -> DetectionVerdict:
    """Verdict and deciding clause for any group of squarefree order"""
    primes = R.primes
    if len(primes) <= 1:
        return _verdict(R, Clause.PRIME)

    if len(primes) == 2:
        if R.is_abelian:
            return _verdict(R, Clause.ABELIAN_TWO_PRIMES)
        q, r = R.n, R.m
        if (q, r) == (31, 5):
            return _verdict(R, Clause.SPORADIC_PAIR)
        if is_safe_sophie_pair(q, r) and q % 4 == 3 and q >= 11:
            return _verdict(R, Clause.SAFE_PAIR)
        if (q, r) == (7, 3):
            return _verdict(R, Clause.F21)
        if R.t != 1 or not (isprime(q) and isprime(r)):
            raise CertificateError(f"{R.describe()} is not a nonabelian C_q:C_r")
        return _verdict(R, Clause.TWO_PRIMES_DETECTING)

    # the GRR-detecting list is complete: every other shape has an explicit witness
    if R.is_abelian:
        return _verdict(R, Clause.ABELIAN)
    if R.params[:3] == (1, 15, 2):
        return _verdict(R, Clause.D30)
    if _is_cq_dihedral(R):
        return _verdict(R, Clause.CQ_DIHEDRAL)
    return _verdict(R, Clause.NOT_GRR_DETECTING)


def admits_grr(R: SquarefreeGroup) -> bool:
    """False exactly for abelian groups of exponent > 2, D6 and D10"""
    if R.is_abelian:
        return R.order <= 2
    return R.params[:3] not in ((1, 3, 2), (1, 5, 2))


def admits_drr(R: SquarefreeGroup) -> bool:
    return True


def index_prime_centraliser_check(R: SquarefreeGroup, H: SubgroupHandle) -> bool:
    """
    C_Aut(R)(H) = 1 for H characteristic of prime index in C_n : C_m, when the
    centre is trivial, every subgroup of order pq (p | m, q | n) is nonabelian
    and m is not prime

    Raises:
        HypothesisFailed, CertificateError
    """
    from core.constructions import cyclic_cross_pairs
    from core.group_automorphisms import centralizer_in_aut

    if R.is_abelian or R.t != 1:
        raise HypothesisFailed(f"{R.describe()} has a nontrivial centre")
    if isprime(R.m):
        raise HypothesisFailed(f"m = {R.m} is prime")
    if cyclic_cross_pairs(R):
        raise HypothesisFailed(f"{R.describe()} has an abelian subgroup of order pq")
    index = R.order // H.order
    if not isprime(index):
        raise HypothesisFailed(f"H has index {index}, not a prime")
    if not H.is_characteristic:
        raise HypothesisFailed(f"{H.describe()} is not characteristic")

    centraliser = centralizer_in_aut(R, H)
    if len(centraliser) != 1:
        raise CertificateError(f"|C_Aut(R)(H)| = {len(centraliser)} despite the hypotheses",
                               group=R.literal)
    return True
