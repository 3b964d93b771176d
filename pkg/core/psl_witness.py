"""
PSL(2, q) Witness
A Cayley graph on C_q : C_((q-1)/2) whose automorphism group is PSL(2, q), found
among the orbital graphs of PSL(2, q) acting on the cosets of a subgroup of
order q + 1. The stabilizer of infinity acts regularly there, and being
self-normalising in PSL(2, q) it gives Aut(R)_S = 1.
"""

import logging
from typing import Dict, List, Tuple

import numpy as np
from sympy import isprime
from sympy.combinatorics import Permutation, PermutationGroup

from core.certificates import WitnessCertificate, certify_witness
from core.errors import CertificateError, NotConfigured
from core.perm_engine import PermGroup, coset_action, orbital_digraph, orbitals
from core.refinement import DigraphRefiner
from core.squarefree_group import identify_table

logger = logging.getLogger(__name__)


def load_psl_generators(q: int) -> PermGroup:
    """
    PSL(2, q) on the q + 1 points of the projective line, from the configured file

    Raises:
        NotConfigured
    """
    from utils.literal_decoder import LiteralDecoder
    from utils.settings import get_settings

    if not (isprime(q) and q % 4 == 3 and q >= 11 and isprime((q - 1) // 2)):
        raise NotConfigured(f"q = {q} is not a prime >= 11 with q = 3 mod 4 and (q-1)/2 prime", q=q)
    path = get_settings().data.generator_file(q)
    if path is None or not path.exists():
        raise NotConfigured(f"no generator file configured for PSL(2,{q})", q=q)

    G = PermGroup(LiteralDecoder.parse_generator_file(path, degree=q + 1), q + 1)
    expected = q * (q * q - 1) // 2
    if G.order() != expected:
        raise CertificateError(f"{path} generates a group of order {G.order()}, expected {expected}")
    return G.freeze()


def _subgroup_candidates(G: PermGroup, order: int) -> List[PermGroup]:
    """
    One two-generated subgroup of the given order per isomorphism signature

    The first involution is fixed; the partner runs over the element list.
    """
    elements = [Permutation(list(e)) for e in G.elements()]
    involutions = [e for e in elements if e.order() == 2]
    if not involutions:
        return []
    a = involutions[0]
    found: Dict[Tuple, PermGroup] = {}
    for b in elements:
        if b.is_Identity or b == a:
            continue
        H = PermutationGroup([a, b])
        if H.order() != order:
            continue
        signature = tuple(sorted(h.order() for h in H.generate()))
        if signature not in found:
            found[signature] = PermGroup([a.array_form, b.array_form], G.degree, order=order)
    return list(found.values())


def _orbital_units(A: PermGroup) -> List[List]:
    """Self-paired orbitals alone, other orbitals together with their pair"""
    orbs = orbitals(A)
    by_index = {o.index: o for o in orbs}
    units = []
    for o in orbs[1:]:
        if o.self_paired:
            units.append([o])
        elif o.index < o.paired:
            units.append([o, by_index[o.paired]])
    return units


def psl2_witness(q: int = 11) -> WitnessCertificate:
    """
    Graph witness on C_q : C_((q-1)/2) with |Aut| = q(q^2 - 1)/2

    Subgroups of order q + 1 are tried one isomorphism type at a time; unions of
    orbitals (closed under pairing) are tried in bitmask order until the vertex
    stabilizer has order q + 1. The Cayley structure comes from the regular image
    of the stabilizer of infinity; the result is certified and R-hat is checked to
    be self-normalising.

    Raises:
        NotConfigured, CertificateError
    """
    from core.cayley import normaliser_identity_check

    G = load_psl_generators(q)
    expected = G.order()
    point_stabilizer = G.point_stabilizer(q)
    degree = expected // (q + 1)

    for H in _subgroup_candidates(G, q + 1):
        action = coset_action(G, H)
        A = action.group
        R_hat = action.image_group(point_stabilizer)
        if not R_hat.is_regular() or A.order() != expected:
            raise CertificateError("point stabilizer is not regular on the cosets")

        units = _orbital_units(A)
        logger.info("PSL(2,%d) on %d cosets: rank %d, %d orbital units",
                    q, action.degree, len(orbitals(A)), len(units))
        for combo in range(1, (1 << len(units)) - 1):
            chosen = [o for i, unit in enumerate(units) if combo >> i & 1 for o in unit]
            adjacency = orbital_digraph(A, chosen)
            stabilizer = DigraphRefiner(adjacency).automorphisms(fixed=[0])
            if stabilizer.order * action.degree != expected:
                continue

            by_vertex = {}
            for perm in R_hat.elements():
                by_vertex[int(perm[0])] = perm
            table = np.asarray([[by_vertex[v][u] for v in range(degree)] for u in range(degree)])
            R, embedding = identify_table(table)
            S = [k for k in range(R.order) if adjacency[0, embedding[k]]]

            certificate = certify_witness(R, S, kind='graph',
                                          method=f'orbital graph of PSL(2,{q}) on {degree} cosets')
            if certificate.aut_order != expected:
                raise CertificateError(f"|Aut| = {certificate.aut_order}, expected {expected}")
            report = normaliser_identity_check(R, S)
            if not report.equal or report.normaliser_order != R.order:
                raise CertificateError("R-hat is not self-normalising", group=R.literal)
            logger.info("PSL(2,%d) witness on %s: |S| = %d", q, R.describe(), len(S))
            return certificate

    raise CertificateError(f"no orbital graph with automorphism group PSL(2,{q})")
