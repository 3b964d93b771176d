"""
Explicit Witness Constructions
Inverse-closed connection sets with trivial Aut(R)_S on groups with at least three
prime divisors, built on a GRR of a characteristic subgroup and closed off with
cosets of a characteristic K so that (K, H) is a wreath pair.
"""

import logging
from typing import List, Optional, Tuple

from sympy import primefactors

from core.certificates import WitnessCertificate
from core.errors import CertificateError, HypothesisFailed
from core.squarefree_group import SquarefreeGroup, SubgroupHandle
from core.wreath import wreath_witness_certificate

logger = logging.getLogger(__name__)


def excluded_shape(R: SquarefreeGroup) -> Optional[str]:
    """Why R is outside the reach of the constructions, or None"""
    t, n, m, _ = R.params
    if R.is_abelian:
        return "R is abelian"
    if len(R.primes) < 3:
        return "|R| has fewer than three prime divisors"
    if (t, n, m) == (1, 15, 2):
        return "R is D30"
    if m == 2 and n in (3, 5) and len(primefactors(t)) == 1:
        return f"R is C{t} x D{2 * n}"
    return None


def cyclic_cross_pairs(R: SquarefreeGroup) -> List[Tuple[int, int]]:
    """Primes (p, q) with p | m, q | nt and an element of order pq"""
    orders = R.orders
    return [(p, q) for p in primefactors(R.m) for q in primefactors(R.n * R.t)
            if (orders == p * q).any()]


def _grr_set_on(R: SquarefreeGroup, H: SubgroupHandle) -> List[int]:
    from core.witness_search import find_grr_set
    group, embedding = R.identify_subgroup(H)
    return [int(embedding[s]) for s in find_grr_set(group)]


def _coset(R: SquarefreeGroup, K: SubgroupHandle, w: int) -> List[int]:
    return [int(v) for v in R.table[list(K.elements), w]]


def _require(R: SquarefreeGroup, condition: bool, message: str):
    if not condition:
        raise HypothesisFailed(message, group=R.literal)


def construct_noncyclic_cross_witness(R: SquarefreeGroup) -> WitnessCertificate:
    """
    Graph witness when every subgroup of order pq (p | m, q | n) is nonabelian

    With p the smallest prime of m: if m != p, S is a GRR set on the index-p
    characteristic subgroup H and (H, H) is the wreath pair. Otherwise K is the
    characteristic C_q (q the largest prime of n), H = <K, x> has order pq and
    S = S' u K(hg) u K(hg)^-1 for a GRR set S' on H, h = x and g of order n/q.

    Raises:
        HypothesisFailed
    """
    reason = excluded_shape(R)
    _require(R, reason is None, reason or '')
    _require(R, R.t == 1 and not cyclic_cross_pairs(R),
             "R has a cyclic subgroup of order pq with p | m and q | nt")

    n, m = R.n, R.m
    p = min(primefactors(m))
    T, inverse = R.table, R.inverse

    if m != p:
        from core.classifier import index_prime_centraliser_check

        H = R.subgroup([R.y(), R.x(p)])
        index_prime_centraliser_check(R, H)
        S = _grr_set_on(R, H)
        return wreath_witness_certificate(R, S, H, H, method='GRR set on the index-p subgroup')

    q = max(primefactors(n))
    n_prime = n // q
    _require(R, q >= 7, f"largest prime of n is {q}, need at least 7")
    K = R.subgroup([R.y(n_prime)])
    H = R.subgroup([R.y(n_prime), R.x()])

    hg = int(T[R.x(), R.y(q)])
    outside = set(_coset(R, K, hg)) | set(_coset(R, K, int(inverse[hg])))
    S = sorted(set(_grr_set_on(R, H)) | outside)
    logger.debug("%s: |S'| = %d, |S - H| = %d", R.describe(), len(S) - len(outside), len(outside))
    return wreath_witness_certificate(R, S, K, H, method='GRR set on <K, x> plus K(hg)^{+-1}')


def construct_cyclic_cross_witness(R: SquarefreeGroup) -> WitnessCertificate:
    """
    Graph witness when some element has order pq with p | m and q | nt

    p is the largest prime admitting such a q (the largest q is taken), H the
    index-p characteristic subgroup, K the characteristic C_q, and g, k, x
    elements of order r = nt/q, q, p with x centralising K. S' is a GRR set on H
    when H is nonabelian, else {kg, (kg)^-1}; then
    S = S' u Kx^{+-1} u K(gx)^{+-1} u K(g^3 x)^{+-1}.

    Raises:
        HypothesisFailed
    """
    reason = excluded_shape(R)
    _require(R, reason is None, reason or '')
    pairs = cyclic_cross_pairs(R)
    _require(R, bool(pairs), "R has no cyclic subgroup of order pq with p | m and q | nt")

    p = max(pair[0] for pair in pairs)
    q = max(pair[1] for pair in pairs if pair[0] == p)
    nt = R.n * R.t
    r = nt // q
    _require(R, r > 5, f"r = nt/q = {r} must exceed 5")

    T, inverse = R.table, R.inverse
    u = int(T[R.z(), R.y()])
    k, g = R.power(u, r), R.power(u, q)
    kg = int(T[k, g])
    x = R.x(R.m // p)
    if T[k, x] != T[x, k]:
        raise CertificateError("x does not centralise K", group=R.literal)

    K = R.subgroup([k])
    H = R.subgroup([R.z(), R.y(), R.x(p)])
    if H.order != R.order // p or not H.is_normal:
        raise CertificateError("index-p subgroup is not normal of index p", group=R.literal)

    S_prime = _grr_set_on(R, H) if R.m != p else [kg, int(inverse[kg])]

    cosets = []
    for w in (x, int(T[g, x]), int(T[R.power(g, 3), x])):
        cosets.append(set(_coset(R, K, w)))
        cosets.append(set(_coset(R, K, int(inverse[w]))))
    forward = cosets[0::2]
    if any(a & b for i, a in enumerate(forward) for b in forward[i + 1:]):
        raise CertificateError("Kx, Kgx and Kg^3x are not distinct", group=R.literal)

    S = sorted(set(S_prime).union(*cosets))
    logger.debug("%s: p=%d q=%d r=%d |S'|=%d |S|=%d", R.describe(), p, q, r, len(S_prime), len(S))
    return wreath_witness_certificate(R, S, K, H, method=f'cyclic cross construction (p={p}, q={q})')


def construct_witness(R: SquarefreeGroup) -> WitnessCertificate:
    """Pick the construction matching R's cross subgroups"""
    if cyclic_cross_pairs(R):
        return construct_cyclic_cross_witness(R)
    return construct_noncyclic_cross_witness(R)
