"""
Wreath Structure
Generalised wreath pairs (K, H) for a connection set S: 1 < K normal in H < R with
K(S-H) = S-H = (S-H)K. Such a pair gives Cay(R, S) the extra automorphism that
right-multiplies H by k in K and fixes everything else.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from core.errors import (BadChain, CertificateError, HypothesisFailed, HypothesisNotMet,
                         HypothesisViolated, NotAutSubgroup, NotInK)
from core.squarefree_group import SquarefreeGroup, SubgroupHandle

logger = logging.getLogger(__name__)


@dataclass
class WreathCertificate:
    """
    A verified wreath pair; right_by_equivalence marks a right-hand check that was
    implied by the left one (K normal in R, or S inverse-closed)
    """
    group: SquarefreeGroup
    K: SubgroupHandle
    H: SubgroupHandle
    left_checked: bool
    right_checked: bool
    right_by_equivalence: bool
    degenerate: bool

    @property
    def plain(self) -> bool:
        """K = H (an ordinary wreath product rather than a generalised one)"""
        return self.K == self.H

    def to_model(self):
        from core.certificates import WreathCertificateModel
        R = self.group
        return WreathCertificateModel(
            K_generators=[list(R.triple(g)) for g in self.K.generators],
            H_generators=[list(R.triple(g)) for g in self.H.generators],
            K_order=self.K.order,
            H_order=self.H.order,
            left_checked=self.left_checked,
            right_checked=self.right_checked,
            right_by_equivalence=self.right_by_equivalence,
            degenerate=self.degenerate,
        )

    def describe(self) -> str:
        kind = 'wreath' if self.plain else 'generalised wreath'
        return f"{kind}: K={self.K.describe()} (order {self.K.order}), H={self.H.describe()} (order {self.H.order})"


def _check_chain(R: SquarefreeGroup, K: SubgroupHandle, H: SubgroupHandle):
    if K.order == 1:
        raise BadChain("K must be nontrivial")
    if not K <= H:
        raise BadChain("K is not contained in H")
    if H.order == R.order:
        raise BadChain("H must be a proper subgroup")
    if not K.is_normal_in(H):
        raise BadChain("K is not normal in H")


def _outside(R: SquarefreeGroup, S: Sequence[int], H: SubgroupHandle) -> np.ndarray:
    S = np.asarray(sorted({int(s) for s in S}), dtype=np.int64)
    return S[~H.mask[S]] if S.size else S


def check_star_star(R: SquarefreeGroup, S: Iterable[int], K: SubgroupHandle,
                    H: SubgroupHandle) -> Optional[WreathCertificate]:
    """
    Test K(S-H) = S-H = (S-H)K

    The right-hand side is implied by the left when K is normal in R or S = S^-1;
    it is then recorded as checked by equivalence.

    Returns:
        WreathCertificate, or None when a side fails

    Raises:
        BadChain
    """
    _check_chain(R, K, H)
    S = sorted({int(s) for s in S})
    T = R.table
    outside = _outside(R, S, H)
    in_outside = np.zeros(R.order, dtype=bool)
    in_outside[outside] = True
    K_el = np.asarray(K.elements)

    if outside.size and not in_outside[T[np.ix_(K_el, outside)]].all():
        return None

    mask = np.zeros(R.order, dtype=bool)
    mask[S] = True
    inverse_closed = bool(mask[R.inverse[S]].all()) if S else True
    by_equivalence = K.is_normal or inverse_closed
    if not by_equivalence and outside.size and not in_outside[T[np.ix_(outside, K_el)]].all():
        return None

    return WreathCertificate(
        group=R, K=K, H=H,
        left_checked=True,
        right_checked=True,
        right_by_equivalence=by_equivalence,
        degenerate=outside.size == 0,
    )


def wreath_pairs(R: SquarefreeGroup) -> List[tuple]:
    """
    Every (K, H) with 1 < K normal in H < R, in scan order: |H| ascending, then
    |K| ascending, ties by element lists
    """
    subgroups = [s for s in R.subgroups() if 1 < s.order < R.order]
    pairs = []
    for H in subgroups:
        for K in subgroups:
            if K.order > H.order:
                break
            if K <= H and K.is_normal_in(H):
                pairs.append((K, H))
    return pairs


def find_gen_wreath(R: SquarefreeGroup, S: Iterable[int]) -> Optional[WreathCertificate]:
    """First wreath pair for S in scan order, or None"""
    S = sorted({int(s) for s in S})
    for K, H in wreath_pairs(R):
        certificate = check_star_star(R, S, K, H)
        if certificate is not None:
            return certificate
    return None


def wreath_vertex_map(graph, certificate: WreathCertificate, k: int) -> np.ndarray:
    """
    Vertex permutation v -> v*k on H, identity elsewhere

    Verified to preserve adjacency and to lie outside the right-regular image.

    Raises:
        NotInK, CertificateError
    """
    R = certificate.group
    k = int(k)
    if k == 0 or k not in certificate.K:
        raise NotInK(f"{R.word(k)} is not a nontrivial element of K")
    perm = np.arange(R.order)
    H = np.asarray(certificate.H.elements)
    perm[H] = R.table[H, k]

    if not graph.preserves_adjacency(perm):
        raise CertificateError("wreath vertex map is not a digraph automorphism",
                               K=certificate.K.describe(), H=certificate.H.describe())
    if np.array_equal(perm, R.table[:, perm[0]]):
        raise CertificateError("wreath vertex map is a right multiplication")
    return perm


def maximal_normalising_overgroup(R: SquarefreeGroup, K: SubgroupHandle,
                                  H: SubgroupHandle) -> SubgroupHandle:
    """First (smallest) maximal proper subgroup containing H in which K is normal"""
    candidates = [L for L in R.subgroups()
                  if L.order < R.order and H <= L and K.is_normal_in(L)]
    maximal = [L for L in candidates if not any(L < M for M in candidates)]
    return maximal[0]


def enlarge_to_maximal(R: SquarefreeGroup, S: Iterable[int], K: SubgroupHandle,
                       H: SubgroupHandle) -> SubgroupHandle:
    """
    Enlarge H while keeping (K, H) a wreath pair for S

    S-H' is a subset of S-H and avoids H', so both sided conditions survive.
    """
    S = sorted({int(s) for s in S})
    larger = maximal_normalising_overgroup(R, K, H)
    if check_star_star(R, S, K, larger) is None:
        raise CertificateError("enlarged pair lost the wreath property")
    return larger


def wreath_witness_certificate(R: SquarefreeGroup, S: Iterable[int], K: SubgroupHandle,
                               H: SubgroupHandle, method: str = 'wreath pair'):
    """
    Witness certificate for S from a wreath pair with trivial Aut(R)_S

    The stored extra automorphism is the wreath vertex map for the first
    nontrivial k in K.

    Raises:
        HypothesisFailed, BadChain
    """
    from core.cayley import build_cayley
    from core.certificates import certify_witness
    from core.group_automorphisms import set_stabilizer

    S = sorted({int(s) for s in S})
    certificate = check_star_star(R, S, K, H)
    if certificate is None:
        raise HypothesisFailed(f"({K.describe()}, {H.describe()}) is not a wreath pair for S")
    if not set_stabilizer(R, S).trivial:
        raise HypothesisFailed("Aut(R)_S is nontrivial")

    graph = build_cayley(R, S)
    k = next(k for k in K.elements if k != 0)
    extra = wreath_vertex_map(graph, certificate, k)
    return certify_witness(R, S, extra=extra, wreath=certificate, method=method, graph=graph)


def stabilizer_normalises_h(R: SquarefreeGroup, S: Iterable[int], K: SubgroupHandle,
                            H: SubgroupHandle) -> bool:
    """
    For K characteristic in R and maximal in H: True iff K(S-H) = S-H while
    K(S-K) != S-K. When True, every element of Aut(R)_S is checked to map H onto H.

    Raises:
        HypothesisViolated, CertificateError
    """
    from core.group_automorphisms import set_stabilizer

    if not (1 < K.order < H.order < R.order and K <= H):
        raise HypothesisViolated("need 1 < K < H < R")
    if not K.is_characteristic:
        raise HypothesisViolated(f"{K.describe()} is not characteristic in R")
    if any(K < L < H for L in R.subgroups()):
        raise HypothesisViolated(f"{K.describe()} is not maximal in {H.describe()}")

    S = sorted({int(s) for s in S})
    T = R.table
    K_el = np.asarray(K.elements)

    def left_stable(X: SubgroupHandle) -> bool:
        outside = _outside(R, S, X)
        if not outside.size:
            return True
        mask = np.zeros(R.order, dtype=bool)
        mask[outside] = True
        return bool(mask[T[np.ix_(K_el, outside)]].all())

    holds = left_stable(H) and not left_stable(K)
    if holds:
        perms = set_stabilizer(R, S).perms
        if not H.mask[perms[:, list(H.elements)]].all():
            raise CertificateError("an element of Aut(R)_S moves H", H=H.describe())
    return holds


def gen_wreath_from_stabilizer(R: SquarefreeGroup, S: Iterable[int], G, K: SubgroupHandle,
                               H: SubgroupHandle) -> WreathCertificate:
    """
    Derive a wreath pair from a group G of digraph automorphisms

    Hypotheses, with G_0 the stabilizer of the identity vertex and R acting by
    right multiplication: H normalises G_0, and for every r outside H the coset
    inclusions G_0 K <= G_0 G_0^r and G_0 K^r <= G_0 G_0^r hold (the first alone
    when S = S^-1). The resulting pair is re-verified by check_star_star.

    Since g lies in G_0 G_0^r exactly when 0^g lies in 0^(G_0^r) = O(r^-1) r,
    with O(u) the G_0-orbit of u, the inclusions read: k r^-1 and r^-1 k lie in
    O(r^-1) for every k in K.

    Args:
        R: Group
        S: Connection set
        G: PermGroup on the vertices of Cay(R, S)
        K, H: Candidate pair

    Raises:
        NotAutSubgroup, BadChain, HypothesisNotMet, CertificateError
    """
    from core.cayley import build_cayley

    S = sorted({int(s) for s in S})
    graph = build_cayley(R, S)
    for g in G.generators:
        if not graph.preserves_adjacency(g):
            raise NotAutSubgroup("a generator of G is not a digraph automorphism")
    _check_chain(R, K, H)

    T, inverse = R.table, R.inverse
    G0 = G.point_stabilizer(0)
    for h in H.generators:
        if not G0.normalizes(T[:, h], G0):
            raise HypothesisNotMet(f"right multiplication by {R.word(h)} does not normalise G_0")

    orbit_of = np.empty(R.order, dtype=np.int64)
    for label, orbit in enumerate(G0.orbits()):
        orbit_of[orbit] = label

    K_el = np.asarray(K.elements)
    one_sided = graph.is_graph
    for r in range(R.order):
        if r in H:
            continue
        u = int(inverse[r])
        if not (orbit_of[T[K_el, u]] == orbit_of[u]).all():
            raise HypothesisNotMet(f"G_0 K is not inside G_0 G_0^r for r = {R.word(r)}")
        if not one_sided and not (orbit_of[T[u, K_el]] == orbit_of[u]).all():
            raise HypothesisNotMet(f"G_0 K^r is not inside G_0 G_0^r for r = {R.word(r)}")

    certificate = check_star_star(R, S, K, H)
    if certificate is None:
        raise CertificateError("stabilizer criteria passed but the wreath pair does not verify")
    return certificate
