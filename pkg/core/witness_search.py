"""
Witness Search
Orbit-reduced searches for connection sets S with trivial Aut(R)_S whose Cayley
(di)graph is not a DRR / GRR, and smallest-first GRR / DRR connection-set search.

Subsets are bit masks over atoms: single non-identity elements for digraphs,
inverse pairs {g, g^-1} for graphs. Aut(R) acts on atoms; a mask is kept as the
orbit representative when no automorphism maps it to a smaller integer.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from core.cayley import build_cayley, extra_automorphism
from core.certificates import NonExistenceReport, WitnessCertificate, certify_witness
from core.errors import BudgetExhausted, CertificateError, NoGRRExists, TooLarge
from core.group_automorphisms import automorphism_perms
from core.squarefree_group import SquarefreeGroup, make_group

logger = logging.getLogger(__name__)

KINDS = ('digraph', 'graph')
STRATEGIES = ('exhaustive', 'structured_first', 'randomized', 'ladder')
_STRATEGY_ALIASES = {'exhaustive_orbit_reduced': 'exhaustive'}


@dataclass
class AtomSpace:
    """Atoms of one search kind and the action of Aut(R) on them"""
    group: SquarefreeGroup
    kind: str
    atoms: List[Tuple[int, ...]]
    atom_perms: np.ndarray
    tables: np.ndarray

    @property
    def size(self) -> int:
        return len(self.atoms)

    def elements(self, mask: int) -> List[int]:
        mask = int(mask)
        out = []
        for i, atom in enumerate(self.atoms):
            if mask >> i & 1:
                out.extend(atom)
        return sorted(out)


def _byte_tables(unit_masks: np.ndarray) -> np.ndarray:
    """
    tables[f, p, v] = OR of unit_masks[f, i] over the bits i set in byte value v at byte p
    """
    count, width = unit_masks.shape
    nbytes = max(1, (width + 7) // 8)
    values = np.arange(256)
    tables = np.zeros((count, nbytes, 256), dtype=np.uint64)
    for i in range(width):
        p, bit = divmod(i, 8)
        has = ((values >> bit) & 1).astype(bool)
        tables[:, p, has] |= unit_masks[:, i][:, None]
    return tables


def _apply(tables: np.ndarray, row: int, byte_columns: List[np.ndarray]) -> np.ndarray:
    out = np.zeros(len(byte_columns[0]), dtype=np.uint64)
    for p, column in enumerate(byte_columns):
        out |= tables[row, p, column]
    return out


def _bytes_of(masks: np.ndarray, nbytes: int) -> List[np.ndarray]:
    return [((masks >> np.uint64(8 * p)) & np.uint64(255)).astype(np.intp) for p in range(nbytes)]


def build_atom_space(R: SquarefreeGroup, kind: str) -> AtomSpace:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    inverse = R.inverse
    if kind == 'digraph':
        atoms = [(g,) for g in range(1, R.order)]
    else:
        atoms = [(g,) if g == inverse[g] else (g, int(inverse[g]))
                 for g in range(1, R.order) if g <= inverse[g]]
    if len(atoms) > 63:
        raise TooLarge(f"{len(atoms)} atoms do not fit a 64-bit mask", group=R.literal)

    atom_of = np.full(R.order, -1, dtype=np.int64)
    for i, atom in enumerate(atoms):
        atom_of[list(atom)] = i
    reps = np.asarray([atom[0] for atom in atoms], dtype=np.int64)
    aut = automorphism_perms(R)
    atom_perms = atom_of[aut[:, reps]] if len(atoms) else np.zeros((len(aut), 0), dtype=np.int64)

    unit_masks = np.left_shift(np.uint64(1), atom_perms.astype(np.uint64))
    return AtomSpace(R, kind, atoms, atom_perms, _byte_tables(unit_masks))


@lru_cache(maxsize=16)
def _space_for(params: Tuple[int, int, int, int], kind: str) -> AtomSpace:
    return build_atom_space(make_group(*params), kind)


def burnside_orbit_count(R: SquarefreeGroup, kind: str) -> int:
    """Number of Aut(R)-orbits on subsets of atoms: mean of 2^(cycles)"""
    space = _space_for(R.params, kind)
    total = 0
    for perm in space.atom_perms:
        seen = np.zeros(space.size, dtype=bool)
        cycles = 0
        for start in range(space.size):
            if not seen[start]:
                cycles += 1
                v = start
                while not seen[v]:
                    seen[v] = True
                    v = perm[v]
        total += 1 << cycles
    return total // len(space.atom_perms)


def orbit_filter(space: AtomSpace, masks: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    (minimal, trivial) flags per mask: orbit-minimal, and minimal with trivial stabilizer
    """
    nbytes = space.tables.shape[1]
    alive = np.ones(len(masks), dtype=bool)
    fixed = np.zeros(len(masks), dtype=bool)
    idx = np.arange(len(masks))
    columns = _bytes_of(masks, nbytes)
    for f in range(1, len(space.atom_perms)):
        if not idx.size:
            break
        img = _apply(space.tables, f, [c[idx] for c in columns])
        current = masks[idx]
        fixed[idx] |= img == current
        keep = img >= current
        alive[idx[~keep]] = False
        idx = idx[keep]
    return alive, alive & ~fixed


def trivial_stabilizer(space: AtomSpace, masks: np.ndarray) -> np.ndarray:
    nbytes = space.tables.shape[1]
    columns = _bytes_of(masks, nbytes)
    fixed = np.zeros(len(masks), dtype=bool)
    for f in range(1, len(space.atom_perms)):
        fixed |= _apply(space.tables, f, columns) == masks
    return ~fixed


def _is_witness(R: SquarefreeGroup, S: Sequence[int]) -> bool:
    return extra_automorphism(build_cayley(R, S)) is not None


@dataclass
class ChunkResult:
    start: int
    representatives: int
    trivial: int
    witness: Optional[int]


def _exhaustive_worker(payload) -> ChunkResult:
    params, kind, start, stop = payload
    space = _space_for(params, kind)
    masks = np.arange(start, stop, dtype=np.uint64)
    minimal, trivial = orbit_filter(space, masks)
    witness = None
    for mask in masks[trivial]:
        if _is_witness(space.group, space.elements(mask)):
            witness = int(mask)
            break
    return ChunkResult(start, int(minimal.sum()), int(trivial.sum()), witness)


def _random_worker(payload) -> ChunkResult:
    params, kind, seed_seq, count = payload
    space = _space_for(params, kind)
    rng = np.random.default_rng(seed_seq)
    masks = rng.integers(0, 1 << space.size, size=count, dtype=np.uint64) if space.size else \
        np.zeros(count, dtype=np.uint64)
    trivial = trivial_stabilizer(space, masks)
    for mask in masks[trivial]:
        if _is_witness(space.group, space.elements(mask)):
            return ChunkResult(0, count, int(trivial.sum()), int(mask))
    return ChunkResult(0, count, int(trivial.sum()), None)


def _run_ordered(worker, payloads: List, threads: int, progress: bool, label: str) -> Iterator[ChunkResult]:
    """Yield worker results in payload order; the pool is torn down when the caller stops"""
    bar = tqdm(total=len(payloads), desc=label, disable=not progress, leave=False)
    if threads <= 1 or len(payloads) <= 1:
        try:
            for payload in payloads:
                yield worker(payload)
                bar.update(1)
        finally:
            bar.close()
        return

    executor = ProcessPoolExecutor(max_workers=threads)
    try:
        for result in executor.map(worker, payloads):
            yield result
            bar.update(1)
    finally:
        bar.close()
        executor.shutdown(wait=True, cancel_futures=True)


def _search_settings(threads, progress, budget, seed):
    from utils.settings import get_settings
    settings = get_settings()
    return (settings,
            settings.threads if threads is None else threads,
            settings.search.progress if progress is None else progress,
            settings.search.randomized_budget if budget is None else budget,
            settings.search.seed if seed is None else seed)


def exhaustive_search(R: SquarefreeGroup, kind: str, threads: Optional[int] = None,
                      progress: Optional[bool] = None) -> Union[WitnessCertificate, NonExistenceReport]:
    """
    Sweep one representative per Aut(R)-orbit of atom subsets

    Returns the lexicographically least witness, or a non-existence report whose
    representative count matches the orbit-counting formula.

    Raises:
        TooLarge, CertificateError
    """
    settings, threads, progress, _, _ = _search_settings(threads, progress, None, None)
    if R.order > settings.engine.exhaustive_max_order:
        raise TooLarge(f"|R| = {R.order} exceeds the exhaustive bound "
                       f"{settings.engine.exhaustive_max_order}")
    space = _space_for(R.params, kind)
    total = 1 << space.size
    chunk = settings.search.chunk_size
    payloads = [(R.params, kind, s, min(s + chunk, total)) for s in range(0, total, chunk)]

    representatives = trivial = 0
    for result in _run_ordered(_exhaustive_worker, payloads, threads, progress,
                               f"{R.describe()} {kind}"):
        representatives += result.representatives
        trivial += result.trivial
        if result.witness is not None:
            S = space.elements(result.witness)
            return certify_witness(R, S, kind=kind, method='exhaustive orbit-reduced sweep')

    burnside = burnside_orbit_count(R, kind)
    if representatives != burnside:
        raise CertificateError(f"sweep kept {representatives} orbit representatives, "
                               f"orbit counting gives {burnside}")
    logger.info("%s: no %s witness among %d orbit classes", R.describe(), kind, representatives)
    return NonExistenceReport(
        group=R.literal,
        group_name=R.describe(),
        kind=kind,
        strategy='exhaustive',
        atoms=space.size,
        subsets_total=total,
        representatives=representatives,
        burnside_count=burnside,
        trivial_stabilizer_checked=trivial,
    )


def _structured_units(R: SquarefreeGroup, space: AtomSpace, K, H) -> List[int]:
    """Atom masks of the free choices: atoms inside H, and K-double cosets outside H"""
    T, inverse = R.table, R.inverse
    atom_index = {atom[0]: i for i, atom in enumerate(space.atoms)}
    atom_of = {}
    for i, atom in enumerate(space.atoms):
        for g in atom:
            atom_of[g] = i

    units = [1 << atom_index[atom[0]] for atom in space.atoms if atom[0] in H]
    covered = H.mask.copy()
    K_el = np.asarray(K.elements)
    for g in range(R.order):
        if covered[g]:
            continue
        block = np.unique(T[np.ix_(K_el, T[g, K_el])].ravel())
        if space.kind == 'graph':
            block = np.union1d(block, inverse[block])
        covered[block] = True
        units.append(sum(1 << i for i in {atom_of[int(b)] for b in block}))
    return units


def structured_search(R: SquarefreeGroup, kind: str, progress: Optional[bool] = None) -> Optional[WitnessCertificate]:
    """
    Try wreath-shaped sets first: any S inside H plus unions of KgK outside H,
    for every pair 1 < K normal in H < R. Such S always has the extra wreath
    automorphism, so only Aut(R)_S = 1 needs checking.
    """
    from core.wreath import wreath_pairs, wreath_witness_certificate
    from utils.settings import get_settings

    settings = get_settings()
    cap, chunk = settings.search.structured_pair_cap, settings.search.chunk_size
    space = _space_for(R.params, kind)

    for K, H in wreath_pairs(R):
        units = _structured_units(R, space, K, H)
        if len(units) > 63 or (1 << len(units)) > cap:
            logger.debug("skipping pair K=%s H=%s: %d free units", K.describe(), H.describe(), len(units))
            continue
        unit_tables = _byte_tables(np.asarray([units], dtype=np.uint64))
        nbytes = unit_tables.shape[1]
        for start in range(1, 1 << len(units), chunk):
            combos = np.arange(start, min(start + chunk, 1 << len(units)), dtype=np.uint64)
            masks = _apply(unit_tables, 0, _bytes_of(combos, nbytes))
            hits = np.flatnonzero(trivial_stabilizer(space, masks))
            if hits.size:
                S = space.elements(masks[hits[0]])
                return wreath_witness_certificate(R, S, K, H, method='structured wreath sets')
    return None


def randomized_search(R: SquarefreeGroup, kind: str, budget: Optional[int] = None,
                      seed: Optional[int] = None, threads: Optional[int] = None,
                      progress: Optional[bool] = None) -> WitnessCertificate:
    """
    Sample `budget` uniform atom subsets from a seeded generator

    Raises:
        BudgetExhausted
    """
    settings, threads, progress, budget, seed = _search_settings(threads, progress, budget, seed)
    space = _space_for(R.params, kind)
    chunk = settings.search.chunk_size
    sizes = [min(chunk, budget - s) for s in range(0, budget, chunk)]
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    payloads = [(R.params, kind, sq, n) for sq, n in zip(seeds, sizes)]

    for result in _run_ordered(_random_worker, payloads, threads, progress, f"{R.describe()} random"):
        if result.witness is not None:
            S = space.elements(result.witness)
            return certify_witness(R, S, kind=kind, method=f'randomized (seed {seed})')
    raise BudgetExhausted(f"no {kind} witness in {budget} samples", budget=budget, seed=seed)


def search_witness(R: SquarefreeGroup, kind: str = 'digraph', strategy: str = 'exhaustive',
                   budget: Optional[int] = None, seed: Optional[int] = None,
                   threads: Optional[int] = None,
                   progress: Optional[bool] = None) -> Union[WitnessCertificate, NonExistenceReport]:
    """
    Look for a witness that R is not DRR- (digraph) or GRR- (graph) detecting

    Args:
        R: Group
        kind: 'digraph' or 'graph'
        strategy: 'exhaustive', 'structured_first', 'randomized' or 'ladder'
            (structured, then randomized, then exhaustive)
        budget: Samples for the randomized strategy
        seed: Seed for the randomized strategy
        threads: Worker processes
        progress: Show progress bars

    Returns:
        WitnessCertificate, or NonExistenceReport after a complete sweep

    Raises:
        BudgetExhausted, TooLarge
    """
    strategy = _STRATEGY_ALIASES.get(strategy, strategy)
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}")

    if strategy == 'exhaustive':
        return exhaustive_search(R, kind, threads, progress)
    if strategy == 'randomized':
        return randomized_search(R, kind, budget, seed, threads, progress)

    found = structured_search(R, kind, progress)
    if found is not None:
        return found
    if strategy == 'ladder':
        try:
            return randomized_search(R, kind, budget, seed, threads, progress)
        except BudgetExhausted:
            logger.info("%s: randomized stage exhausted, falling back to the full sweep", R.describe())
    return exhaustive_search(R, kind, threads, progress)


def _smallest_set(H: SquarefreeGroup, kind: str) -> List[int]:
    """First orbit-minimal atom combination, by size then lexicographically, that is a DRR/GRR"""
    inverse = H.inverse
    if kind == 'digraph':
        atoms = [(g,) for g in range(1, H.order)]
    else:
        atoms = [(g,) if g == inverse[g] else (g, int(inverse[g]))
                 for g in range(1, H.order) if g <= inverse[g]]
    atom_of = np.full(H.order, -1, dtype=np.int64)
    for i, atom in enumerate(atoms):
        atom_of[list(atom)] = i
    reps = np.asarray([a[0] for a in atoms], dtype=np.int64)
    atom_perms = atom_of[automorphism_perms(H)[1:][:, reps]]

    for size in range(len(atoms) + 1):
        for combo in combinations(range(len(atoms)), size):
            chosen = np.asarray(combo, dtype=np.int64)
            if any(tuple(sorted(perm[chosen])) < combo for perm in atom_perms):
                continue
            S = sorted(g for i in combo for g in atoms[i])
            if not _is_witness(H, S):
                return S
    raise NoGRRExists(f"{H.describe()} has no {'GRR' if kind == 'graph' else 'DRR'}")


def _cached_set(H: SquarefreeGroup, kind: str) -> List[int]:
    from utils.cache_manager import get_cache
    from utils.settings import get_settings

    limit = get_settings().engine.find_set_max_order
    if H.order > limit:
        raise TooLarge(f"|H| = {H.order} exceeds {limit}")

    cache = get_cache()
    key = cache.generate_cache_key('regular-set', H.literal, kind)
    cached = cache.get_cached_result(key)
    if cached is not None:
        S = sorted(H.index(tuple(t)) for t in cached)
        if _is_witness(H, S):
            raise CertificateError("cached connection set no longer verifies", group=H.literal)
        return S

    S = _smallest_set(H, kind)
    cache.cache_result(key, [list(H.triple(s)) for s in S])
    logger.info("%s: %s set of size %d", H.describe(), 'GRR' if kind == 'graph' else 'DRR', len(S))
    return S


def find_grr_set(H: SquarefreeGroup) -> List[int]:
    """
    Inverse-closed S with Aut(Cay(H, S)) = H-hat

    Raises:
        NoGRRExists, TooLarge
    """
    from core.classifier import admits_grr

    if not admits_grr(H):
        raise NoGRRExists(f"{H.describe()} admits no GRR")
    return _cached_set(H, 'graph')


def find_drr_set(H: SquarefreeGroup) -> List[int]:
    """
    S with Aut(Cay(H, S)) = H-hat

    Raises:
        TooLarge
    """
    return _cached_set(H, 'digraph')
