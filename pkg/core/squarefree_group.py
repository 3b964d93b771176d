"""
Squarefree Groups
Groups of squarefree order in Hoelder normal form R = C_t x (C_n : C_m).

An element is the triple (a, b, c) standing for z^a y^b x^c, with z central of
order t, y of order n, x of order m and x y x^-1 = y^j. Elements are indexed
lexicographically, index(a, b, c) = a*n*m + b*m + c, so the identity is 0.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd, prod
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint, primefactors
from sympy.ntheory import n_order

from core.errors import BadAction, NonSquarefree, NotCoprime, NotNormal, TooLarge

logger = logging.getLogger(__name__)

Triple = Tuple[int, int, int]


def is_squarefree(order: int) -> bool:
    return order >= 1 and all(e == 1 for e in factorint(order).values())


def canonical_exponent(n: int, m: int, j: int) -> int:
    """Smallest j^u mod n over units u mod m (one representative per isomorphism class)"""
    if n == 1 or m == 1:
        return 1
    return min(pow(j, u, n) for u in range(1, m) if gcd(u, m) == 1)


def _default_table_bound() -> int:
    from utils.settings import get_settings
    return get_settings().engine.max_group_order


class SquarefreeGroup:
    """
    C_t x (C_n : C_m) with element arithmetic.

    Multiplication table, inverses and element orders are built eagerly when
    the order is within the engine bound; the object is read-only afterwards.
    """

    def __init__(self, t: int, n: int, m: int, j: int, table_bound: Optional[int] = None):
        self.t, self.n, self.m, self.j = t, n, m, j
        self.order = t * n * m
        self._jpow = np.array([pow(j, c, n) for c in range(m)], dtype=np.int64)

        bound = _default_table_bound() if table_bound is None else table_bound
        self.has_tables = self.order <= bound
        if self.has_tables:
            self._build_tables()

    # --- construction ---

    def _build_tables(self):
        t, n, m = self.t, self.n, self.m
        idx = np.arange(self.order, dtype=np.int64)
        a, b, c = idx // (n * m), (idx // m) % n, idx % m

        self.triples = np.stack([a, b, c], axis=1)
        A = (a[:, None] + a[None, :]) % t
        B = (b[:, None] + b[None, :] * self._jpow[c][:, None]) % n
        C = (c[:, None] + c[None, :]) % m
        self._table = (A * n * m + B * m + C).astype(np.int64)

        ai, ci = (-a) % t, (-c) % m
        bi = (-b * self._jpow[ci]) % n
        self._inverse = ai * n * m + bi * m + ci

        orders = np.zeros(self.order, dtype=np.int64)
        power = idx.copy()
        k = 1
        while not orders.all():
            orders[(power == 0) & (orders == 0)] = k
            power = self._table[power, idx]
            k += 1
        self._orders = orders

        for arr in (self.triples, self._table, self._inverse, self._orders):
            arr.setflags(write=False)

    def _require_tables(self):
        if not self.has_tables:
            raise TooLarge(f"|R| = {self.order} exceeds the engine bound for tabulated groups",
                           order=self.order)

    # --- identity / literals ---

    @property
    def literal(self) -> str:
        return f"sqfree:t={self.t},n={self.n},m={self.m},j={self.j}"

    @property
    def params(self) -> Tuple[int, int, int, int]:
        return (self.t, self.n, self.m, self.j)

    def describe(self) -> str:
        """Short structural name, e.g. C5 x (C7:C3), D30, C42"""
        if self.n == 1:
            return f"C{self.order}"
        if self.m == 2 and self.j == self.n - 1:
            core = f"D{2 * self.n}"
        else:
            core = f"C{self.n}:C{self.m}"
        return core if self.t == 1 else f"C{self.t} x {core}"

    def __eq__(self, other):
        return isinstance(other, SquarefreeGroup) and self.params == other.params

    def __hash__(self):
        return hash(('SquarefreeGroup',) + self.params)

    def __repr__(self):
        return f"SquarefreeGroup({self.literal}, {self.describe()})"

    @property
    def is_abelian(self) -> bool:
        return self.n == 1

    @property
    def is_dihedral(self) -> bool:
        return self.t == 1 and self.m == 2 and self.n > 1

    @property
    def primes(self) -> List[int]:
        return primefactors(self.order)

    # --- element arithmetic on triples ---

    def reduce(self, g: Sequence[int]) -> Triple:
        a, b, c = g
        return (a % self.t, b % self.n, c % self.m)

    def mul(self, g: Sequence[int], h: Sequence[int]) -> Triple:
        a1, b1, c1 = g
        a2, b2, c2 = h
        return ((a1 + a2) % self.t,
                (b1 + b2 * int(self._jpow[c1 % self.m])) % self.n,
                (c1 + c2) % self.m)

    def inv(self, g: Sequence[int]) -> Triple:
        a, b, c = g
        ci = (-c) % self.m
        return ((-a) % self.t, (-b * int(self._jpow[ci])) % self.n, ci)

    def element_order(self, g: Sequence[int]) -> int:
        g = self.reduce(g)
        power, k = g, 1
        while power != (0, 0, 0):
            power = self.mul(power, g)
            k += 1
        return k

    # --- index arithmetic ---

    def index(self, g: Sequence[int]) -> int:
        a, b, c = self.reduce(g)
        return a * self.n * self.m + b * self.m + c

    def triple(self, idx: int) -> Triple:
        idx = int(idx)
        return (idx // (self.n * self.m), (idx // self.m) % self.n, idx % self.m)

    @property
    def identity(self) -> int:
        return 0

    @property
    def table(self) -> np.ndarray:
        self._require_tables()
        return self._table

    @property
    def inverse(self) -> np.ndarray:
        self._require_tables()
        return self._inverse

    @property
    def orders(self) -> np.ndarray:
        self._require_tables()
        return self._orders

    def power(self, idx: int, k: int) -> int:
        a, b, c = self.triple(idx)
        result, base, k = (0, 0, 0), (a, b, c), k % max(1, self.element_order((a, b, c)))
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return self.index(result)

    def z(self, k: int = 1) -> int:
        return self.index((k, 0, 0))

    def y(self, k: int = 1) -> int:
        return self.index((0, k, 0))

    def x(self, k: int = 1) -> int:
        return self.index((0, 0, k))

    def word(self, idx: int) -> str:
        a, b, c = self.triple(idx)
        parts = []
        for letter, exp in (('z', a), ('y', b), ('x', c)):
            if exp == 1:
                parts.append(letter)
            elif exp:
                parts.append(f"{letter}^{exp}")
        return '*'.join(parts) or '1'

    # --- subgroups ---

    def closure(self, generators: Iterable[int]) -> np.ndarray:
        """Sorted element indices of the subgroup generated by `generators`"""
        T = self.table
        gens = np.unique(np.asarray([int(g) for g in generators], dtype=np.int64))
        members = np.zeros(self.order, dtype=bool)
        members[0] = True
        frontier = np.array([0], dtype=np.int64)
        while frontier.size and gens.size:
            products = T[np.ix_(frontier, gens)].ravel()
            new = np.unique(products[~members[products]])
            members[new] = True
            frontier = new
        return np.flatnonzero(members)

    def subgroup(self, generators: Iterable[int]) -> 'SubgroupHandle':
        gens = tuple(dict.fromkeys(int(g) for g in generators if int(g) != 0))
        return SubgroupHandle(self, self.closure(gens), gens)

    def subgroup_from_mask(self, mask: np.ndarray) -> 'SubgroupHandle':
        """Handle for a known subgroup given by membership mask; generators chosen greedily"""
        elements = np.flatnonzero(mask)
        gens: List[int] = []
        covered = np.zeros(self.order, dtype=bool)
        covered[0] = True
        for g in elements[np.argsort(-self.orders[elements], kind='stable')]:
            if not covered[g]:
                gens.append(int(g))
                covered[:] = False
                covered[self.closure(gens)] = True
        if not np.array_equal(covered, np.asarray(mask, dtype=bool)):
            raise BadAction("mask is not a subgroup")
        return SubgroupHandle(self, elements, tuple(gens))

    def is_normal_mask(self, mask: np.ndarray) -> bool:
        T, inv = self.table, self.inverse
        elements = np.flatnonzero(mask)
        for g in (self.z(), self.y(), self.x()):
            if g == 0:
                continue
            conj = T[T[g, elements], inv[g]]
            if not mask[conj].all():
                return False
        return True

    @cached_property
    def _subgroup_list(self) -> List['SubgroupHandle']:
        found = {}
        cyclic = []
        for g in range(self.order):
            elements = self.closure([g])
            key = elements.tobytes()
            if key not in found:
                found[key] = (elements, (g,) if g else ())
                cyclic.append((elements, g))

        # metacyclic, so every subgroup is generated by two elements
        for i, (e1, g1) in enumerate(cyclic):
            m1 = np.zeros(self.order, dtype=bool)
            m1[e1] = True
            for e2, g2 in cyclic[i + 1:]:
                if m1[e2].all():
                    continue
                elements = self.closure([g1, g2])
                key = elements.tobytes()
                if key not in found:
                    found[key] = (elements, (g1, g2))

        handles = [SubgroupHandle(self, e, gens) for e, gens in found.values()]
        handles.sort(key=lambda h: (h.order, h.elements))
        logger.debug("%s: %d subgroups", self.describe(), len(handles))
        return handles

    def subgroups(self) -> List['SubgroupHandle']:
        """Every subgroup, sorted by (order, element list)"""
        self._require_tables()
        return list(self._subgroup_list)

    def hall_subgroup(self, primes: Iterable[int]) -> 'SubgroupHandle':
        """Hall subgroup for the requested primes that divide |R|"""
        wanted = set(primes)

        def part(k):
            return prod(p for p in primefactors(k) if p in wanted)

        tp, np_, mp = part(self.t), part(self.n), part(self.m)
        gens = [self.z(self.t // tp), self.y(self.n // np_), self.x(self.m // mp)]
        return self.subgroup(g for g in gens if g != 0)

    def centre(self) -> 'SubgroupHandle':
        T = self.table
        return self.subgroup_from_mask(np.all(T == T.T, axis=1))

    def centralizer(self, g: int) -> 'SubgroupHandle':
        T = self.table
        return self.subgroup_from_mask(T[g, :] == T[:, g])

    def quotient(self, K: 'SubgroupHandle') -> 'Quotient':
        """Canonical Hoelder form of R/K with the element-wise projection"""
        if not K.is_normal:
            raise NotNormal(f"{K.describe()} is not normal in {self.describe()}")
        T = self.table
        labels = np.full(self.order, -1, dtype=np.int64)
        reps = []
        for g in range(self.order):
            if labels[g] < 0:
                labels[T[g, list(K.elements)]] = len(reps)
                reps.append(g)
        reps = np.asarray(reps)
        local = labels[T[np.ix_(reps, reps)]]
        group, embedding = identify_table(local)
        position = np.empty(len(reps), dtype=np.int64)
        position[embedding] = np.arange(len(reps))
        return Quotient(group=group, projection=position[labels])

    def identify_subgroup(self, H: 'SubgroupHandle') -> Tuple['SquarefreeGroup', np.ndarray]:
        """Hoelder form of H plus the embedding (element index of H's form -> index in R)"""
        elements = np.asarray(H.elements)
        lookup = np.full(self.order, -1, dtype=np.int64)
        lookup[elements] = np.arange(len(elements))
        local = lookup[self.table[np.ix_(elements, elements)]]
        group, embedding = identify_table(local)
        return group, elements[embedding]


class SubgroupHandle:
    """A subgroup of a tabulated SquarefreeGroup: elements, generators, normality"""

    def __init__(self, group: SquarefreeGroup, elements: Iterable[int], generators: Tuple[int, ...]):
        self.group = group
        self.elements = tuple(int(e) for e in sorted(int(e) for e in elements))
        self.generators = tuple(int(g) for g in generators)
        self.order = len(self.elements)
        mask = np.zeros(group.order, dtype=bool)
        mask[list(self.elements)] = True
        mask.setflags(write=False)
        self.mask = mask
        self.is_normal = group.is_normal_mask(mask)

    @cached_property
    def is_characteristic(self) -> bool:
        return is_characteristic(self.group, self)

    def __contains__(self, idx) -> bool:
        return bool(self.mask[int(idx)])

    def __len__(self):
        return self.order

    def __eq__(self, other):
        return (isinstance(other, SubgroupHandle) and self.group == other.group
                and self.elements == other.elements)

    def __hash__(self):
        return hash((self.group, self.elements))

    def __le__(self, other: 'SubgroupHandle') -> bool:
        return bool(other.mask[list(self.elements)].all())

    def __lt__(self, other: 'SubgroupHandle') -> bool:
        return self.order < other.order and self <= other

    def is_normal_in(self, other: 'SubgroupHandle') -> bool:
        """self normal in other (self <= other assumed)"""
        T, inv = self.group.table, self.group.inverse
        own = np.asarray(self.elements)
        for g in other.generators:
            if not self.mask[T[T[g, own], inv[g]]].all():
                return False
        return True

    def describe(self) -> str:
        if not self.generators:
            return '<1>'
        return '<' + ', '.join(self.group.word(g) for g in self.generators) + '>'

    def __repr__(self):
        return f"SubgroupHandle({self.describe()}, order={self.order})"


@dataclass(frozen=True)
class Quotient:
    group: SquarefreeGroup
    projection: np.ndarray


def make_group(t: int, n: int, m: int, j: int, table_bound: Optional[int] = None) -> SquarefreeGroup:
    """
    Build C_t x (C_n : C_m) from Hoelder parameters

    Args:
        t, n, m: Orders of the central factor, the kernel and the complement
        j: Action exponent (x y x^-1 = y^j); canonicalized
        table_bound: Override of the engine bound for tabulation

    Returns:
        SquarefreeGroup in canonical form

    Raises:
        NotCoprime, NonSquarefree, BadAction
    """
    t, n, m, j = int(t), int(n), int(m), int(j)
    if min(t, n, m) < 1:
        raise BadAction("t, n and m must be positive", t=t, n=n, m=m)
    if gcd(t, n) != 1 or gcd(t, m) != 1 or gcd(n, m) != 1:
        raise NotCoprime(f"t={t}, n={n}, m={m} are not pairwise coprime")
    if not is_squarefree(t * n * m):
        raise NonSquarefree(f"order {t * n * m} is not squarefree", order=t * n * m)

    if n == 1 or m == 1:
        if n > 1 and j % n != 1:
            raise BadAction(f"j={j} must be 1 when m=1")
        return SquarefreeGroup(t * n * m, 1, 1, 1, table_bound)

    j %= n
    if gcd(j, n) != 1 or pow(j, m, n) != 1:
        raise BadAction(f"j={j} does not satisfy j^m = 1 mod n", n=n, m=m, j=j)
    if n_order(j, n) != m:
        raise BadAction(f"order of j={j} mod {n} is not m={m} (centre would be nontrivial)")
    if gcd(j - 1, n) != 1:
        raise BadAction(f"gcd(j-1, n) = {gcd(j - 1, n)} (y-part would meet the centre)")

    return SquarefreeGroup(t, n, m, canonical_exponent(n, m, j), table_bound)


def enumerate_groups(order: int, table_bound: Optional[int] = None) -> List[SquarefreeGroup]:
    """One canonical SquarefreeGroup per isomorphism class of the given order"""
    if not is_squarefree(order):
        raise NonSquarefree(f"order {order} is not squarefree", order=order)

    found = {(order, 1, 1, 1)}
    primes = primefactors(order)
    for roles in product(range(3), repeat=len(primes)):
        n = prod(p for p, r in zip(primes, roles) if r == 1)
        m = prod(p for p, r in zip(primes, roles) if r == 2)
        if n == 1 or m == 1:
            continue
        t = order // (n * m)
        for j in range(2, n):
            if gcd(j, n) == 1 and gcd(j - 1, n) == 1 and n_order(j, n) == m:
                found.add((t, n, m, canonical_exponent(n, m, j)))

    params = sorted(found, key=lambda p: (p[1], p[2], p[3]))
    return [SquarefreeGroup(*p, table_bound=table_bound) for p in params]


def _powers(table: np.ndarray, g: int, k: int, identity: int) -> np.ndarray:
    out = np.empty(k, dtype=np.int64)
    out[0] = identity
    for i in range(1, k):
        out[i] = table[out[i - 1], g]
    return out


def identify_table(table: np.ndarray) -> Tuple[SquarefreeGroup, np.ndarray]:
    """
    Identify a group of squarefree order given by its multiplication table

    Args:
        table: N x N array, table[g, h] = g*h on local labels 0..N-1

    Returns:
        (SquarefreeGroup G, embedding) with embedding[k] = local label of G's element k
    """
    table = np.asarray(table, dtype=np.int64)
    N = table.shape[0]
    labels = np.arange(N)
    identity = int(np.flatnonzero(np.all(table == labels, axis=1))[0])
    inverse = np.argmax(table == identity, axis=1)

    orders = np.zeros(N, dtype=np.int64)
    power = labels.copy()
    k = 1
    while not orders.all():
        orders[(power == identity) & (orders == 0)] = k
        power = table[power, labels]
        k += 1

    centre = np.flatnonzero(np.all(table == table.T, axis=1))
    commutators = np.unique(table[table[table, inverse[:, None]], inverse[None, :]])

    derived = np.zeros(N, dtype=bool)
    derived[identity] = True
    frontier = np.array([identity])
    while frontier.size:
        products = table[np.ix_(frontier, commutators)].ravel()
        new = np.unique(products[~derived[products]])
        derived[new] = True
        frontier = new

    t, n = len(centre), int(derived.sum())
    m = N // (t * n)
    if t * n * m != N or gcd(t, n * m) != 1 or gcd(n, m) != 1:
        raise BadAction("table is not a group of squarefree order in Hoelder form")

    z = int(centre[np.argmax(orders[centre] == t)])
    derived_elements = np.flatnonzero(derived)
    y = int(derived_elements[np.argmax(orders[derived_elements] == n)])
    x = int(np.argmax(orders == m))

    y_pows = _powers(table, y, n, identity)
    j = 1
    if n > 1 and m > 1:
        conj = table[table[x, y], inverse[x]]
        j = int(np.flatnonzero(y_pows == conj)[0])
        u = min((u for u in range(1, m) if gcd(u, m) == 1), key=lambda u: pow(j, u, n))
        x_u = identity
        for _ in range(u):
            x_u = table[x_u, x]
        x, j = int(x_u), pow(j, u, n)

    group = make_group(t, n, m, j)
    z_pows = _powers(table, z, t, identity)
    x_pows = _powers(table, x, m, identity)
    idx = np.arange(N)
    a, b, c = idx // (n * m), (idx // m) % n, idx % m
    embedding = table[table[z_pows[a], y_pows[b]], x_pows[c]]
    if len(np.unique(embedding)) != N:
        raise BadAction("identification failed: generators do not span the table")
    return group, embedding


def isomorphic(G1: SquarefreeGroup, G2: SquarefreeGroup) -> bool:
    """
    Brute-force isomorphism test by searching images of u = z*y and x in G2

    C_t x (C_n : C_m) = <u, x | u^(tn), x^m, x u x^-1 = u^J> with J = 1 mod t, J = j mod n.
    """
    if G1.order != G2.order:
        return False
    tn, m = G1.t * G1.n, G1.m
    J = next(J for J in range(1, tn + 1) if J % G1.t == 1 % G1.t and J % G1.n == G1.j % G1.n)
    T, inv, orders = G2.table, G2.inverse, G2.orders

    us = np.flatnonzero(orders == tn)
    xs = np.flatnonzero(orders == m)
    for u in us:
        target = G2.power(int(u), J)
        conj = T[T[xs, u], inv[xs]]
        for x in xs[conj == target]:
            if len(G2.closure([int(u), int(x)])) == G2.order:
                return True
    return False


def is_characteristic(R: SquarefreeGroup, K: SubgroupHandle) -> bool:
    """K invariant under every automorphism of R"""
    from core.group_automorphisms import automorphism_perms
    perms = automorphism_perms(R)
    return bool(K.mask[perms[:, list(K.elements)]].all())
