"""
Group Automorphisms
Aut(R) by exhaustive generator images, set stabilizers Aut(R)_S, and the
explicit stabilizing automorphisms used against wreath-product connection sets.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import (CertificateError, HypothesisFailed, IdentityInS, NoCaseMatched,
                         NotInverseClosed, WrongShape)
from core.squarefree_group import SquarefreeGroup, SubgroupHandle, _powers

logger = logging.getLogger(__name__)


class GroupAutomorphism:
    """
    Automorphism of a tabulated SquarefreeGroup, stored as the induced permutation
    of element indices; the generator images are perm[z], perm[y], perm[x]
    """

    def __init__(self, group: SquarefreeGroup, perm: Sequence[int]):
        self.group = group
        self.perm = np.asarray(perm, dtype=np.int64)

    @classmethod
    def from_images(cls, group: SquarefreeGroup, z_img: int, y_img: int, x_img: int) -> 'GroupAutomorphism':
        """Extend generator images to the element map (bijectivity is the caller's check)"""
        T, t, n, m = group.table, group.t, group.n, group.m
        idx = np.arange(group.order)
        a, b, c = idx // (n * m), (idx // m) % n, idx % m
        zp, yp, xp = _powers(T, z_img, t, 0), _powers(T, y_img, n, 0), _powers(T, x_img, m, 0)
        return cls(group, T[T[zp[a], yp[b]], xp[c]])

    @classmethod
    def conjugation(cls, group: SquarefreeGroup, w: int) -> 'GroupAutomorphism':
        """g -> w g w^-1"""
        T, inv = group.table, group.inverse
        return cls(group, T[T[w, :], inv[w]])

    @classmethod
    def identity(cls, group: SquarefreeGroup) -> 'GroupAutomorphism':
        return cls(group, np.arange(group.order))

    @property
    def generator_images(self) -> Tuple[int, int, int]:
        R = self.group
        return int(self.perm[R.z()]), int(self.perm[R.y()]), int(self.perm[R.x()])

    def apply(self, g: int) -> int:
        return int(self.perm[g])

    def then(self, other: 'GroupAutomorphism') -> 'GroupAutomorphism':
        """self first, then other"""
        return GroupAutomorphism(self.group, other.perm[self.perm])

    def inverse(self) -> 'GroupAutomorphism':
        out = np.empty_like(self.perm)
        out[self.perm] = np.arange(len(self.perm))
        return GroupAutomorphism(self.group, out)

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(len(self.perm))))

    def is_multiplicative(self) -> bool:
        """phi(gh) = phi(g)phi(h) for every pair, plus bijectivity"""
        T, p = self.group.table, self.perm
        if len(np.unique(p)) != len(p):
            return False
        return bool(np.array_equal(p[T], T[p[:, None], p[None, :]]))

    def fixes_set(self, S: Iterable[int]) -> bool:
        S = sorted(int(s) for s in S)
        return sorted(int(v) for v in self.perm[S]) == S

    def to_dict(self):
        R = self.group
        return {
            'generator_images': [list(R.triple(g)) for g in self.generator_images],
            'words': [R.word(g) for g in self.generator_images],
        }

    def __eq__(self, other):
        return (isinstance(other, GroupAutomorphism) and self.group == other.group
                and np.array_equal(self.perm, other.perm))

    def __hash__(self):
        return hash((self.group, self.perm.tobytes()))

    def __repr__(self):
        R = self.group
        z, y, x = (R.word(g) for g in self.generator_images)
        return f"GroupAutomorphism(z->{z}, y->{y}, x->{x})"


@lru_cache(maxsize=64)
def automorphism_perms(R: SquarefreeGroup) -> np.ndarray:
    """
    Every automorphism of R as a row of induced element permutations

    Rows are sorted lexicographically, so row 0 is the identity.

    Raises:
        TooLarge
    """
    T, inv, orders = R.table, R.inverse, R.orders
    t, n, m = R.t, R.n, R.m
    centre = np.all(T == T.T, axis=1)

    zs = np.flatnonzero(centre & (orders == t))
    ys = np.flatnonzero(orders == n)
    xs = np.flatnonzero(orders == m)

    idx = np.arange(R.order)
    a, b, c = idx // (n * m), (idx // m) % n, idx % m
    rows = []
    for y in ys:
        y_pow = _powers(T, int(y), n, 0)
        target = y_pow[R.j % n] if n > 1 else 0
        ok = xs[T[T[xs, y], inv[xs]] == target]
        for x in ok:
            x_pow = _powers(T, int(x), m, 0)
            for z in zs:
                z_pow = _powers(T, int(z), t, 0)
                perm = T[T[z_pow[a], y_pow[b]], x_pow[c]]
                if np.bincount(perm, minlength=R.order).max() == 1:
                    rows.append(perm)

    perms = np.asarray(rows, dtype=np.int64)
    perms = perms[np.lexsort(perms.T[::-1])]
    perms.setflags(write=False)
    logger.debug("|Aut(%s)| = %d", R.describe(), len(perms))
    return perms


def automorphism_group(R: SquarefreeGroup) -> List[GroupAutomorphism]:
    """Complete, duplicate-free list of Aut(R); the identity comes first"""
    return [GroupAutomorphism(R, p) for p in automorphism_perms(R)]


def automorphism_order(R: SquarefreeGroup) -> int:
    return len(automorphism_perms(R))


@dataclass
class AutStabReport:
    """Aut(R)_S as rows of element permutations"""
    group: SquarefreeGroup
    aut_order: int
    perms: np.ndarray

    @property
    def order(self) -> int:
        return len(self.perms)

    @property
    def trivial(self) -> bool:
        return len(self.perms) == 1

    @property
    def automorphisms(self) -> List[GroupAutomorphism]:
        return [GroupAutomorphism(self.group, p) for p in self.perms]

    def to_dict(self):
        return {
            'aut_order': self.aut_order,
            'stabilizer_order': self.order,
            'trivial': self.trivial,
            'stabilizer': [a.to_dict() for a in self.automorphisms],
        }


def set_stabilizer(R: SquarefreeGroup, S: Iterable[int]) -> AutStabReport:
    """
    Aut(R)_S by filtering the full Aut(R) sweep

    Raises:
        IdentityInS, TooLarge
    """
    S = np.asarray(sorted({int(s) for s in S}), dtype=np.int64)
    if S.size and S[0] == 0:
        raise IdentityInS("the identity cannot be in a connection set")
    perms = automorphism_perms(R)
    mask = np.zeros(R.order, dtype=bool)
    mask[S] = True
    keep = mask[perms[:, S]].all(axis=1) if S.size else np.ones(len(perms), dtype=bool)
    return AutStabReport(R, len(perms), perms[keep])


def centralizer_in_aut(R: SquarefreeGroup, H: SubgroupHandle) -> np.ndarray:
    """Rows of Aut(R) fixing every element of H"""
    perms = automorphism_perms(R)
    elements = np.asarray(H.elements)
    return perms[np.all(perms[:, elements] == elements, axis=1)]


def is_inverse_closed(R: SquarefreeGroup, S: Iterable[int]) -> bool:
    S = {int(s) for s in S}
    return all(int(R.inverse[s]) in S for s in S)


def _dihedral_conjugator(D: SquarefreeGroup, S: Iterable[int]) -> int:
    """Reflection w whose conjugation inverts rotations and fixes S"""
    if not D.is_dihedral:
        raise WrongShape(f"{D.describe()} is not dihedral")
    S = {int(s) for s in S}
    if not is_inverse_closed(D, S):
        raise NotInverseClosed("S must be inverse-closed")

    r = D.n
    reflections = sorted(D.triple(s)[1] for s in S if D.triple(s)[2] == 1)
    if len(reflections) >= 3:
        reflections = sorted(set(range(r)) - set(reflections))
    if len(reflections) >= 3:
        raise WrongShape(f"S and its complement both meet {len(reflections)}+ reflections of D{2 * r}")

    # y^c x conjugates y^i x to y^(2c-i) x
    if not reflections:
        c = 0
    elif len(reflections) == 1:
        c = reflections[0]
    else:
        i, k = reflections
        c = (i + k) * ((r + 1) // 2) % r
    return D.index((0, c, 1))


def dihedral_inverting_automorphism(D: SquarefreeGroup, S: Iterable[int]) -> GroupAutomorphism:
    """
    Nontrivial automorphism of D6 / D10 fixing an inverse-closed S and inverting rotations

    Realized as conjugation by a reflection chosen from S: none in S gives x, one gives
    that reflection, two (y^i x, y^k x) give y^((i+k)/2) x. Three or more reflections
    are handled through the complement.

    Raises:
        WrongShape, NotInverseClosed
    """
    S = [int(s) for s in S]
    beta = GroupAutomorphism.conjugation(D, _dihedral_conjugator(D, S))
    if beta.is_identity or not beta.fixes_set(S):
        raise CertificateError("dihedral inverting automorphism failed verification")
    return beta


def conjugation_witness(R: SquarefreeGroup, K: SubgroupHandle, H: SubgroupHandle,
                        S: Iterable[int]) -> GroupAutomorphism:
    """
    Inner automorphism h -> k^-1 h k for k in (Z(H) and K) outside Z(R)

    Args:
        R: Group
        K, H: Wreath pair for (R, S)
        S: Connection set

    Returns:
        Nontrivial element of Aut(R)_S

    Raises:
        HypothesisFailed: Z(H) and K lie inside Z(R)
    """
    from core.wreath import check_star_star

    S = [int(s) for s in S]
    if check_star_star(R, S, K, H) is None:
        raise HypothesisFailed("(K, H) is not a wreath pair for S")

    T = R.table
    centre_R = np.all(T == T.T, axis=1)
    H_elements = np.asarray(H.elements)
    for k in K.elements:
        central_in_H = np.all(T[k, H_elements] == T[H_elements, k])
        if central_in_H and not centre_R[k]:
            alpha = GroupAutomorphism.conjugation(R, int(R.inverse[k]))
            if alpha.is_identity or not alpha.fixes_set(S):
                raise CertificateError("conjugation witness failed verification", k=R.word(k))
            return alpha

    raise HypothesisFailed("Z(H) and K is contained in Z(R)")


def _conjugate_subgroup(R: SquarefreeGroup, elements: Sequence[int], w: int) -> Tuple[int, ...]:
    """w^-1 X w"""
    T, inv = R.table, R.inverse
    return tuple(sorted(int(v) for v in T[T[inv[w], list(elements)], w]))


def _find_conjugator(R: SquarefreeGroup, source: SubgroupHandle, target: SubgroupHandle) -> Optional[int]:
    for w in range(R.order):
        if _conjugate_subgroup(R, source.elements, w) == target.elements:
            return w
    return None


def cq_dihedral_wreath_witness(R: SquarefreeGroup, K: SubgroupHandle, H: SubgroupHandle,
                               S: Iterable[int]) -> GroupAutomorphism:
    """
    Nontrivial element of Aut(R)_S for R = C_q x D_2r (r in {3, 5}) and a wreath pair
    (K, H) with |K| prime

    The pair is first moved by an inner automorphism so that K is <x>, <y> or <z>,
    then H is enlarged to a maximal proper subgroup normalising K. Five shapes remain:
    (<x,y>, <y>) lifts the dihedral inverting automorphism, (<y,z>, <y>) and
    (<x,z>, <x>) are inner, (<y,z>, <z>) inverts z and y and lifts the quotient's
    inverting reflection, (<x,z>, <z>) inverts z only.

    Raises:
        WrongShape, NotInverseClosed, HypothesisFailed, NoCaseMatched
    """
    from sympy import isprime
    from core.wreath import check_star_star, enlarge_to_maximal

    if not (R.m == 2 and R.n in (3, 5) and isprime(R.t) and R.t not in (2, R.n)):
        raise WrongShape(f"{R.describe()} is not C_q x D_2r with r in (3, 5)")
    S = sorted(int(s) for s in S)
    if not is_inverse_closed(R, S):
        raise NotInverseClosed("S must be inverse-closed")
    if not isprime(K.order):
        raise HypothesisFailed(f"|K| = {K.order} is not prime")
    if check_star_star(R, S, K, H) is None:
        raise HypothesisFailed("(K, H) is not a wreath pair for S")

    X, Y, Z = R.subgroup([R.x()]), R.subgroup([R.y()]), R.subgroup([R.z()])
    target = {2: X, R.n: Y, R.t: Z}[K.order]
    w = _find_conjugator(R, K, target)
    if w is None:
        raise NoCaseMatched("no conjugate of K is generated by x, y or z")

    T, inv = R.table, R.inverse
    to_normal = T[T[inv[w], :], w]
    from_normal = np.empty_like(to_normal)
    from_normal[to_normal] = np.arange(R.order)

    S_n = sorted(int(v) for v in to_normal[S])
    K_n = target
    H_n = R.subgroup(int(to_normal[g]) for g in H.generators)
    H_n = enlarge_to_maximal(R, S_n, K_n, H_n)

    if K_n == Z and H_n.order == 2 * R.t:
        v = _find_conjugator(R, H_n, R.subgroup([R.x(), R.z()]))
        if v is None:
            raise NoCaseMatched("order-2q overgroup is not conjugate to <x, z>")
        shift = T[T[inv[v], :], v]
        S_n = sorted(int(s) for s in shift[S_n])
        H_n = R.subgroup([R.x(), R.z()])
        to_normal = shift[to_normal]
        from_normal = np.empty_like(to_normal)
        from_normal[to_normal] = np.arange(R.order)

    XY, YZ, XZ = R.subgroup([R.x(), R.y()]), R.subgroup([R.y(), R.z()]), R.subgroup([R.x(), R.z()])

    if H_n == XY and K_n == Y:
        D, embedding = R.identify_subgroup(H_n)
        local = np.full(R.order, -1, dtype=np.int64)
        local[embedding] = np.arange(len(embedding))
        S_H = [int(local[s]) for s in S_n if s in H_n]
        w_H = int(embedding[_dihedral_conjugator(D, S_H)])
        alpha_n = GroupAutomorphism.conjugation(R, w_H)
        case = 'dihedral lift'
    elif H_n == YZ and K_n == Y:
        alpha_n = conjugation_witness(R, K_n, H_n, S_n)
        case = 'inner, K = <y>'
    elif H_n == YZ and K_n == Z:
        alpha_n = _quotient_lift(R, K_n, S_n)
        case = 'quotient lift'
    elif H_n == XZ and K_n == Z:
        alpha_n = GroupAutomorphism.from_images(R, R.z(-1), R.y(), R.x())
        case = 'invert z'
    elif H_n == XZ and K_n == X:
        alpha_n = conjugation_witness(R, K_n, H_n, S_n)
        case = 'inner, K = <x>'
    else:
        raise NoCaseMatched(f"normalized pair (K={K_n.describe()}, H={H_n.describe()}) "
                            "is none of the five shapes")

    alpha = GroupAutomorphism(R, from_normal[alpha_n.perm[to_normal]])
    if alpha.is_identity or not alpha.fixes_set(S) or not alpha.is_multiplicative():
        raise CertificateError("wreath witness automorphism failed verification", case=case)
    logger.debug("%s: stabilizing automorphism via %s", R.describe(), case)
    return alpha


def _quotient_lift(R: SquarefreeGroup, K: SubgroupHandle, S: Sequence[int]) -> GroupAutomorphism:
    """z -> z^-1, y -> y^-1, x -> the involution over beta(pi(x)) in R/K"""
    quotient = R.quotient(K)
    Q, pi = quotient.group, quotient.projection
    image = sorted({int(pi[s]) for s in S} - {0})
    beta = dihedral_inverting_automorphism(Q, image)
    target_coset = beta.apply(int(pi[R.x()]))
    x_img = next(g for g in range(R.order) if pi[g] == target_coset and R.orders[g] == 2)
    return GroupAutomorphism.from_images(R, R.z(-1), R.y(-1), x_img)
