"""
Permutation Engine
Permutation groups on points 0..d-1 backed by sympy's deterministic Schreier-Sims.

Composition is right action throughout: p*q applies p first, then q
(i^(p*q) = (i^p)^q), which matches sympy.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from core.errors import DegreeMismatch, IndexTooLarge, NotSubgroup, TooLarge

logger = logging.getLogger(__name__)


def _limits():
    from utils.settings import get_settings
    return get_settings().engine


def as_permutation(perm, degree: int) -> Permutation:
    """Coerce an image array / list / Permutation to a sympy Permutation of `degree`"""
    if isinstance(perm, Permutation):
        if perm.size != degree:
            raise DegreeMismatch(f"permutation of degree {perm.size}, expected {degree}")
        return perm
    images = [int(v) for v in perm]
    if len(images) != degree:
        raise DegreeMismatch(f"permutation of degree {len(images)}, expected {degree}")
    return Permutation(images)


def compose(p: Sequence[int], q: Sequence[int]) -> np.ndarray:
    """Image array of 'p then q'"""
    return np.asarray(q)[np.asarray(p)]


def invert(p: Sequence[int]) -> np.ndarray:
    p = np.asarray(p)
    out = np.empty_like(p)
    out[p] = np.arange(len(p))
    return out


class PermGroup:
    """
    Finite permutation group given by generators

    The stabilizer chain is built lazily by sympy; freeze() forces it so the
    object can be shared read-only between threads.
    """

    def __init__(self, generators: Iterable, degree: int, order: Optional[int] = None):
        self.degree = int(degree)
        self._order = order
        perms = [as_permutation(g, self.degree) for g in generators]
        perms = [p for p in perms if not p.is_Identity]
        self._gens = perms
        self._group = PermutationGroup(perms or [Permutation(self.degree - 1)])
        self.frozen = False

    @classmethod
    def from_sympy(cls, group: PermutationGroup) -> 'PermGroup':
        return cls(group.generators, group.degree)

    def freeze(self) -> 'PermGroup':
        self._group.schreier_sims()
        self.frozen = True
        return self

    @property
    def generators(self) -> List[np.ndarray]:
        return [np.asarray(p.array_form, dtype=np.int64) for p in self._gens]

    def order(self) -> int:
        if self._order is None:
            self._order = int(self._group.order())
        return self._order

    def orbits(self) -> List[List[int]]:
        return sorted(sorted(int(p) for p in orbit) for orbit in self._group.orbits())

    def orbit(self, point: int) -> List[int]:
        return sorted(int(p) for p in self._group.orbit(point))

    def is_transitive(self) -> bool:
        return self.degree == 1 or bool(self._group.is_transitive())

    def is_regular(self) -> bool:
        return self.is_transitive() and self.order() == self.degree

    def point_stabilizer(self, point: int) -> 'PermGroup':
        return PermGroup.from_sympy(self._group.stabilizer(int(point)))

    def contains(self, perm) -> bool:
        return bool(self._group.contains(as_permutation(perm, self.degree)))

    def __contains__(self, perm) -> bool:
        return self.contains(perm)

    def is_subgroup_of(self, other: 'PermGroup') -> bool:
        if self.degree != other.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree} differ")
        return all(other._group.contains(g) for g in self._gens)

    def elements(self) -> Iterator[np.ndarray]:
        """Every element as an image array; bounded by engine.element_list_limit"""
        limit = _limits().element_list_limit
        if self.order() > limit:
            raise TooLarge(f"group order {self.order()} exceeds the element-list limit {limit}")
        for images in self._group.generate(af=True):
            yield np.asarray(images, dtype=np.int64)

    def element_set(self) -> set:
        return {tuple(int(v) for v in e) for e in self.elements()}

    def normalizes(self, perm, H: 'PermGroup') -> bool:
        g = as_permutation(perm, self.degree)
        return all(H._group.contains(h ^ g) for h in H._gens)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, gens={len(self._gens)})"


def symmetric_group(degree: int) -> PermGroup:
    gens = []
    if degree > 1:
        gens.append([1, 0] + list(range(2, degree)))
    if degree > 2:
        gens.append(list(range(1, degree)) + [0])
    return PermGroup(gens, degree)


def regular_representation(R) -> PermGroup:
    """
    Right-regular image of R: g -> (v -> v*g) on element indices

    Raises:
        TooLarge
    """
    table = R.table
    gens = [table[:, g] for g in (R.z(), R.y(), R.x()) if g != 0]
    return PermGroup(gens, R.order).freeze()


def right_multiplication(R, g: int) -> np.ndarray:
    """Image array of v -> v*g"""
    return R.table[:, g].copy()


def left_multiplication(R, g: int) -> np.ndarray:
    """Image array of v -> g*v"""
    return R.table[g, :].copy()


def normalizer_strategy(A: PermGroup, H: PermGroup) -> str:
    """Which branch normalizer_in takes for N_A(H): 'normal', 'element sweep' or 'backtrack search'"""
    if all(A.normalizes(a, H) for a in A._gens):
        return 'normal'
    order = A.order()
    limits = _limits()
    if order <= limits.normalizer_sweep_limit and order <= limits.element_list_limit:
        return 'element sweep'
    return 'backtrack search'


def normalizer_in(A: PermGroup, H: PermGroup) -> PermGroup:
    """
    N_A(H) for H <= A

    Strategy: H normal in A returns A; otherwise an incremental element sweep when
    |A| is within engine.normalizer_sweep_limit, and sympy's base-image backtrack
    search above it.

    Raises:
        NotSubgroup
    """
    if not H.is_subgroup_of(A):
        raise NotSubgroup("H is not a subgroup of A")

    strategy = normalizer_strategy(A, H)
    if strategy == 'normal':
        return A

    if strategy == 'element sweep':
        found = PermGroup(H._gens, A.degree)
        for images in A._group.generate(af=True):
            g = Permutation(images)
            if found._group.contains(g):
                continue
            if A.normalizes(g, H):
                found = PermGroup(found._gens + [g], A.degree)
        logger.debug("normalizer sweep over %d elements: order %d", A.order(), found.order())
        return found

    prop = lambda g: all(H._group.contains(h ^ g) for h in H._gens)
    return PermGroup.from_sympy(A._group.subgroup_search(prop, init_subgroup=H._group))


@dataclass
class CosetAction:
    """Action of G on the right cosets H*g; coset 0 is H itself"""
    group: PermGroup
    reps: List[Permutation]
    subgroup: PermGroup
    parent: PermGroup
    _buckets: Dict[Tuple, List[int]]
    _h_orbits: List[List[int]]

    @property
    def degree(self) -> int:
        return len(self.reps)

    def coset_of(self, g) -> int:
        g = as_permutation(g, self.parent.degree)
        key = _coset_key(self._h_orbits, g)
        for idx in self._buckets.get(key, ()):
            if self.subgroup._group.contains(g * self.reps[idx] ** -1):
                return idx
        raise NotSubgroup("element is not in the acting group")

    def image(self, g) -> np.ndarray:
        """Permutation of cosets induced by any element g of G"""
        g = as_permutation(g, self.parent.degree)
        return np.asarray([self.coset_of(rep * g) for rep in self.reps], dtype=np.int64)

    def image_group(self, K: PermGroup) -> PermGroup:
        return PermGroup([self.image(g) for g in K._gens], self.degree)


def _coset_key(h_orbits: List[List[int]], g: Permutation) -> Tuple:
    images = g.array_form
    return tuple(frozenset(images[p] for p in orbit) for orbit in h_orbits)


def coset_action(G: PermGroup, H: PermGroup) -> CosetAction:
    """
    Transitive action of G on right cosets of H

    Raises:
        NotSubgroup, IndexTooLarge
    """
    if not H.is_subgroup_of(G):
        raise NotSubgroup("H is not a subgroup of G")
    index = G.order() // H.order()
    limit = _limits().max_coset_index
    if index > limit:
        raise IndexTooLarge(f"index {index} exceeds {limit}", index=index)

    h_orbits = H.orbits()
    identity = Permutation(G.degree - 1)
    reps = [identity]
    buckets: Dict[Tuple, List[int]] = {_coset_key(h_orbits, identity): [0]}
    images = [dict() for _ in G._gens]

    def lookup_or_add(g):
        key = _coset_key(h_orbits, g)
        for idx in buckets.get(key, ()):
            if H._group.contains(g * reps[idx] ** -1):
                return idx
        reps.append(g)
        buckets.setdefault(key, []).append(len(reps) - 1)
        return len(reps) - 1

    i = 0
    while i < len(reps):
        for s, gen in enumerate(G._gens):
            images[s][i] = lookup_or_add(reps[i] * gen)
        i += 1

    gens = [[img[k] for k in range(len(reps))] for img in images]
    action = CosetAction(PermGroup(gens, len(reps)), reps, H, G, buckets, h_orbits)
    logger.debug("coset action of degree %d", len(reps))
    return action


@dataclass(frozen=True)
class Orbital:
    index: int
    suborbit: Tuple[int, ...]
    paired: int
    self_paired: bool


def _transversal_from(G: PermGroup, point: int) -> Dict[int, Permutation]:
    """point^t = q for each (q, t)"""
    return {int(q): t for q, t in G._group.orbit_transversal(point, pairs=True)}


def orbitals(G: PermGroup) -> List[Orbital]:
    """
    Orbits of a transitive G on ordered pairs, as suborbits of the stabilizer of 0

    Orbital i is the G-orbit of (0, d) for d in suborbit i; suborbit 0 is {0}.
    """
    if not G.is_transitive():
        raise NotSubgroup("orbitals need a transitive group")
    suborbits = G.point_stabilizer(0).orbits()
    where = {}
    for idx, orbit in enumerate(suborbits):
        for p in orbit:
            where[p] = idx

    result = []
    for idx, orbit in enumerate(suborbits):
        delta = orbit[0]
        to_zero = _transversal_from(G, delta)[0]
        partner = where[to_zero.array_form[0]]
        result.append(Orbital(idx, tuple(orbit), partner, partner == idx))
    return result


def orbital_digraph(G: PermGroup, selected: Iterable[Orbital]) -> np.ndarray:
    """Adjacency matrix of the union of the chosen orbitals"""
    transversal = _transversal_from(G, 0)
    adjacency = np.zeros((G.degree, G.degree), dtype=bool)
    deltas = [d for orb in selected for d in orb.suborbit]
    for v, t in transversal.items():
        images = t.array_form
        adjacency[v, [images[d] for d in deltas]] = True
    return adjacency
