"""
Certificates
Versioned JSON models for witnesses, wreath pairs and non-existence sweeps, with
independent re-verification.
"""

import logging
from datetime import datetime
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from core.errors import CertificateError, HypothesisFailed, NotInverseClosed

logger = logging.getLogger(__name__)

SCHEMA = "regrep/1"


class WreathCertificateModel(BaseModel):
    K_generators: List[List[int]]
    H_generators: List[List[int]]
    K_order: int
    H_order: int
    left_checked: bool
    right_checked: bool
    right_by_equivalence: bool
    degenerate: bool


class WitnessCertificate(BaseModel):
    """
    Evidence that R is not DRR- (kind=digraph) or GRR- (kind=graph) detecting:
    Aut(R)_S is trivial, yet Cay(R, S) has more than |R| automorphisms
    """
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default=SCHEMA, alias='schema')
    group: str
    group_name: str
    group_order: int
    kind: Literal['digraph', 'graph']
    connection_set: List[List[int]]
    connection_words: List[str]
    aut_order: int
    stabilizer_sweep: int
    stabilizer_trivial: bool
    extra_automorphism: List[int]
    wreath: Optional[WreathCertificateModel] = None
    method: str = ''

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)

    def element_indices(self, R) -> List[int]:
        return sorted(R.index(tuple(t)) for t in self.connection_set)


class NonExistenceReport(BaseModel):
    """Exhaustive sweep of one kind of connection set that found no witness"""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default=SCHEMA, alias='schema')
    group: str
    group_name: str
    kind: Literal['digraph', 'graph']
    strategy: str
    atoms: int
    subsets_total: int
    representatives: int
    burnside_count: int
    trivial_stabilizer_checked: int
    detecting: bool = True


class RunReport(BaseModel):
    """One CLI invocation: inputs, results, timing and the limits in force"""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default=SCHEMA, alias='schema')
    command: str
    inputs: Dict[str, Any] = Field(default_factory=dict)
    results: List[Dict[str, Any]] = Field(default_factory=list)
    started: str = Field(default_factory=lambda: datetime.now().isoformat())
    elapsed_seconds: float = 0.0
    engine_limits: Dict[str, Any] = Field(default_factory=dict)
    limits_hit: List[str] = Field(default_factory=list)
    seed: Optional[int] = None


def _is_right_multiplication(R, perm: np.ndarray) -> bool:
    return bool(np.array_equal(perm, R.table[:, int(perm[0])]))


def certify_witness(R, S, kind: Optional[str] = None, extra: Optional[np.ndarray] = None,
                    wreath=None, method: str = '', graph=None) -> WitnessCertificate:
    """
    Check a candidate witness and package it

    Args:
        R: SquarefreeGroup
        S: Connection set (element indices)
        kind: 'digraph' or 'graph'; defaults to graph when S is inverse-closed
        extra: Known automorphism outside R-hat; found by search when omitted
        wreath: Optional WreathCertificate that produced S
        method: Provenance label
        graph: Prebuilt CayleyDigraph for S

    Raises:
        NotInverseClosed, HypothesisFailed, CertificateError
    """
    from core.cayley import build_cayley, graph_automorphisms, extra_automorphism
    from core.group_automorphisms import set_stabilizer

    S = sorted({int(s) for s in S})
    graph = graph or build_cayley(R, S)
    if kind is None:
        kind = 'graph' if graph.is_graph else 'digraph'
    if kind == 'graph' and not graph.is_graph:
        raise NotInverseClosed("graph witnesses need an inverse-closed connection set")

    stabilizer = set_stabilizer(R, S)
    if not stabilizer.trivial:
        raise HypothesisFailed(f"|Aut(R)_S| = {stabilizer.order}", group=R.literal)

    aut = graph_automorphisms(graph)
    if aut.order() <= R.order:
        raise HypothesisFailed("Cay(R, S) is a DRR", group=R.literal)

    if extra is None:
        extra = extra_automorphism(graph)
    extra = np.asarray(extra, dtype=np.int64)
    if not graph.preserves_adjacency(extra) or _is_right_multiplication(R, extra):
        raise CertificateError("extra automorphism failed verification", group=R.literal)

    certificate = WitnessCertificate(
        group=R.literal,
        group_name=R.describe(),
        group_order=R.order,
        kind=kind,
        connection_set=[list(R.triple(s)) for s in S],
        connection_words=[R.word(s) for s in S],
        aut_order=aut.order(),
        stabilizer_sweep=stabilizer.aut_order,
        stabilizer_trivial=True,
        extra_automorphism=[int(v) for v in extra],
        wreath=wreath.to_model() if wreath is not None else None,
        method=method,
    )
    logger.info("Certified %s witness on %s (|S| = %d, |Aut| = %d)",
                kind, R.describe(), len(S), certificate.aut_order)
    return certificate


def verify_witness_certificate(certificate: WitnessCertificate) -> bool:
    """
    Rebuild everything from the certificate and re-check it

    Raises:
        CertificateError
    """
    from core.cayley import build_cayley, graph_automorphisms
    from core.group_automorphisms import set_stabilizer
    from core.wreath import check_star_star
    from utils.literal_decoder import LiteralDecoder

    if certificate.schema_version != SCHEMA:
        raise CertificateError(f"unsupported schema {certificate.schema_version!r}")
    R = LiteralDecoder.parse_group(certificate.group)
    S = certificate.element_indices(R)
    graph = build_cayley(R, S)

    if certificate.kind == 'graph' and not graph.is_graph:
        raise CertificateError("graph certificate with a non inverse-closed set")
    stabilizer = set_stabilizer(R, S)
    if not stabilizer.trivial:
        raise CertificateError(f"|Aut(R)_S| = {stabilizer.order}, expected 1")
    aut_order = graph_automorphisms(graph).order()
    if aut_order != certificate.aut_order or aut_order <= R.order:
        raise CertificateError(f"|Aut| = {aut_order}, certificate says {certificate.aut_order}")

    extra = np.asarray(certificate.extra_automorphism, dtype=np.int64)
    if (len(extra) != R.order or len(np.unique(extra)) != R.order
            or not graph.preserves_adjacency(extra) or _is_right_multiplication(R, extra)):
        raise CertificateError("stored extra automorphism does not verify")

    if certificate.wreath is not None:
        K = R.subgroup(R.index(tuple(g)) for g in certificate.wreath.K_generators)
        H = R.subgroup(R.index(tuple(g)) for g in certificate.wreath.H_generators)
        if check_star_star(R, S, K, H) is None:
            raise CertificateError("stored wreath pair does not verify")
    return True
