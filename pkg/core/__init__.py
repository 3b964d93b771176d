"""
regrep - Core Modules
Groups of squarefree order, Cayley digraph automorphisms, wreath structure and
DRR / GRR detection witnesses
"""

from .errors import RegrepError
from .squarefree_group import SquarefreeGroup, SubgroupHandle, enumerate_groups, make_group
from .perm_engine import PermGroup
from .group_automorphisms import GroupAutomorphism, automorphism_group, set_stabilizer
from .cayley import CayleyDigraph, ConnectionSet, build_cayley, is_drr, is_grr
from .wreath import WreathCertificate, check_star_star, find_gen_wreath
from .certificates import NonExistenceReport, RunReport, WitnessCertificate, verify_witness_certificate
from .witness_search import find_drr_set, find_grr_set, search_witness
from .constructions import construct_cyclic_cross_witness, construct_noncyclic_cross_witness
from .classifier import Clause, DetectionVerdict, classify
from .report_generator import VerificationReportGenerator

__all__ = [
    'RegrepError',
    'SquarefreeGroup',
    'SubgroupHandle',
    'enumerate_groups',
    'make_group',
    'PermGroup',
    'GroupAutomorphism',
    'automorphism_group',
    'set_stabilizer',
    'CayleyDigraph',
    'ConnectionSet',
    'build_cayley',
    'is_drr',
    'is_grr',
    'WreathCertificate',
    'check_star_star',
    'find_gen_wreath',
    'NonExistenceReport',
    'RunReport',
    'WitnessCertificate',
    'verify_witness_certificate',
    'find_drr_set',
    'find_grr_set',
    'search_witness',
    'construct_cyclic_cross_witness',
    'construct_noncyclic_cross_witness',
    'Clause',
    'DetectionVerdict',
    'classify',
    'VerificationReportGenerator',
]
