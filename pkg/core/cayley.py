"""
Cayley Digraphs
Cay(R, S) with an arc r -> s*r for every s in S; vertex v is element index v,
so vertex 0 is the identity.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Optional

import numpy as np

from core.errors import CertificateError, IdentityInS, NotInverseClosed, TooLarge
from core.perm_engine import PermGroup, normalizer_in, normalizer_strategy, regular_representation
from core.refinement import DigraphRefiner, SearchResult
from core.squarefree_group import SquarefreeGroup

logger = logging.getLogger(__name__)


class ConnectionSet:
    """A subset of R minus the identity, with a membership mask"""

    def __init__(self, group: SquarefreeGroup, elements: Iterable[int]):
        self.group = group
        self.elements = tuple(sorted({int(s) for s in elements}))
        if self.elements and self.elements[0] == 0:
            raise IdentityInS("the identity cannot be in a connection set")
        mask = np.zeros(group.order, dtype=bool)
        mask[list(self.elements)] = True
        mask.setflags(write=False)
        self.mask = mask

    @cached_property
    def inverse_closed(self) -> bool:
        return bool(self.mask[self.group.inverse[list(self.elements)]].all())

    def inverse(self) -> 'ConnectionSet':
        return ConnectionSet(self.group, self.group.inverse[list(self.elements)])

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        return bool(self.mask[int(g)])

    def __eq__(self, other):
        return (isinstance(other, ConnectionSet) and self.group == other.group
                and self.elements == other.elements)

    def __hash__(self):
        return hash((self.group, self.elements))

    def words(self) -> List[str]:
        return [self.group.word(s) for s in self.elements]

    def __repr__(self):
        return f"ConnectionSet({{{', '.join(self.words())}}})"


class CayleyDigraph:
    """
    Cay(R, S) as a dense adjacency matrix
    """

    def __init__(self, group: SquarefreeGroup, connection_set: ConnectionSet):
        self.group = group
        self.connection_set = connection_set
        T = group.table
        adjacency = np.zeros((group.order, group.order), dtype=bool)
        S = list(connection_set.elements)
        if S:
            rows = np.repeat(np.arange(group.order), len(S))
            cols = T[np.asarray(S)[None, :], np.arange(group.order)[:, None]].ravel()
            adjacency[rows, cols] = True
        adjacency.setflags(write=False)
        self.adjacency = adjacency

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def is_graph(self) -> bool:
        return self.connection_set.inverse_closed

    def out_neighbours(self, v: int) -> List[int]:
        return [int(u) for u in np.flatnonzero(self.adjacency[v])]

    def preserves_adjacency(self, perm) -> bool:
        g = np.asarray(perm, dtype=np.int64)
        A = self.adjacency
        return bool(np.array_equal(A[np.ix_(g, g)], A))

    def to_dot(self) -> str:
        """Graphviz text: undirected edges when S is inverse-closed, arcs otherwise"""
        R = self.group
        kind, arrow = ('graph', '--') if self.is_graph else ('digraph', '->')
        lines = [f'{kind} "Cay({R.describe()})" {{']
        for v in range(self.order):
            lines.append(f'  {v} [label="{R.word(v)}"];')
        sources, targets = np.nonzero(self.adjacency)
        for u, v in zip(sources, targets):
            if self.is_graph and u > v:
                continue
            lines.append(f'  {u} {arrow} {v};')
        lines.append('}')
        return '\n'.join(lines) + '\n'


def build_cayley(R: SquarefreeGroup, S: Iterable[int]) -> CayleyDigraph:
    """
    Build Cay(R, S) and check right multiplications act as automorphisms

    Raises:
        IdentityInS, TooLarge
    """
    connection_set = S if isinstance(S, ConnectionSet) else ConnectionSet(R, S)
    graph = CayleyDigraph(R, connection_set)
    for g in (R.z(), R.y(), R.x()):
        if g and not graph.preserves_adjacency(R.table[:, g]):
            raise CertificateError(f"right multiplication by {R.word(g)} is not an automorphism")
    return graph


def _refiner(graph: CayleyDigraph) -> DigraphRefiner:
    return DigraphRefiner(graph.adjacency)


def vertex_stabilizer(graph: CayleyDigraph, stop_at_first: bool = False) -> SearchResult:
    """Automorphisms fixing the identity vertex"""
    return _refiner(graph).automorphisms(fixed=[0], stop_at_first=stop_at_first)


def graph_automorphisms(graph: CayleyDigraph) -> PermGroup:
    """
    Aut(Cay(R, S)) as right multiplications plus the stabilizer of vertex 0

    Raises:
        TooLarge
    """
    stabilizer = vertex_stabilizer(graph)
    R = graph.group
    gens = [R.table[:, g] for g in (R.z(), R.y(), R.x()) if g] + stabilizer.generators
    return PermGroup(gens, graph.order, order=graph.order * stabilizer.order)


def extra_automorphism(graph: CayleyDigraph) -> Optional[np.ndarray]:
    """A nontrivial automorphism fixing vertex 0 (hence outside R-hat), or None"""
    result = vertex_stabilizer(graph, stop_at_first=True)
    return result.generators[0] if result.generators else None


def is_drr(R: SquarefreeGroup, S: Iterable[int]) -> bool:
    """|Aut(Cay(R, S))| = |R|"""
    return extra_automorphism(build_cayley(R, S)) is None


def is_grr(R: SquarefreeGroup, S: Iterable[int]) -> bool:
    """
    Raises:
        NotInverseClosed
    """
    graph = build_cayley(R, S)
    if not graph.is_graph:
        raise NotInverseClosed("a GRR needs an inverse-closed connection set")
    return extra_automorphism(graph) is None


@dataclass
class NormaliserReport:
    """Both sides of N_A(R-hat) = R-hat : Aut(R)_S, computed independently"""
    group: str
    connection_set: List[str]
    aut_order: int
    normaliser_order: int
    product_order: int
    stabilizer_order: int
    equal: bool
    method: str

    def to_dict(self):
        return dict(self.__dict__)


def normaliser_identity_check(R: SquarefreeGroup, S: Iterable[int]) -> NormaliserReport:
    """
    Compare N_A(R-hat) inside A = Aut(Cay(R, S)) with R-hat . Aut(R)_S

    Raises:
        TooLarge
    """
    from core.group_automorphisms import set_stabilizer
    from utils.settings import get_settings

    limits = get_settings().engine
    if R.order > limits.normaliser_check_max_order:
        raise TooLarge(f"|R| = {R.order} exceeds {limits.normaliser_check_max_order}")

    graph = build_cayley(R, S)
    A = graph_automorphisms(graph)
    r_hat = regular_representation(R)

    strategy = normalizer_strategy(A, r_hat)
    normaliser = normalizer_in(A, r_hat)

    stabilizer = set_stabilizer(R, graph.connection_set.elements)
    product = PermGroup(list(r_hat.generators) + list(stabilizer.perms), R.order)

    n_order, p_order = normaliser.order(), product.order()
    if max(n_order, p_order) <= limits.element_list_limit:
        equal = normaliser.element_set() == product.element_set()
        method = f"{strategy}; element sets"
    else:
        equal = (n_order == p_order and product.is_subgroup_of(normaliser)
                 and normaliser.is_subgroup_of(product))
        method = f"{strategy}; orders and mutual containment"

    report = NormaliserReport(
        group=R.literal,
        connection_set=graph.connection_set.words(),
        aut_order=A.order(),
        normaliser_order=n_order,
        product_order=p_order,
        stabilizer_order=stabilizer.order,
        equal=equal,
        method=method,
    )
    logger.debug("normaliser identity on %s: %s", R.describe(), report)
    return report
