"""Enumeration-backed checks of the weight bounds and the border-triple argument.

Each check runs on a concrete instance and reports both sides of the
inequality it verifies.
"""

import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, gcd

import numpy as np

from .codes import LinearCode, codeword_chunks, dual, extremal_bound, minimum_weight
from .designs import DesignParams, IncidenceStructure, bordered_code
from .errors import MembershipError, PreconditionError, UndefinedMinimumError
from .f2core import DEFAULT_ENUMERATION_BUDGET, BitMatrix, BitVector, support_of

logger = logging.getLogger(__name__)


def _dual_minimum(code: LinearCode, budget: int | None) -> int | None:
    try:
        return minimum_weight(dual(code), budget)
    except UndefinedMinimumError:
        return None


def _fraction_str(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


# =============================================================================
# Dual minimum weights of C1, C2, C3
# =============================================================================


@dataclass(frozen=True)
class DualBoundReport:
    """d(C1^⊥) against (r+λ)/λ and d(C2^⊥) against (b+r)/r."""

    c1_dual_min_weight: int | None
    c1_bound: Fraction
    c2_dual_min_weight: int | None
    c2_bound: Fraction

    @property
    def c1_holds(self) -> bool:
        return self.c1_dual_min_weight is None or self.c1_dual_min_weight >= self.c1_bound

    @property
    def c2_holds(self) -> bool:
        return self.c2_dual_min_weight is None or self.c2_dual_min_weight >= self.c2_bound

    @property
    def holds(self) -> bool:
        return self.c1_holds and self.c2_holds

    def as_dict(self) -> dict:
        return {
            "c1_dual_min_weight": self.c1_dual_min_weight,
            "c1_bound": _fraction_str(self.c1_bound),
            "c2_dual_min_weight": self.c2_dual_min_weight,
            "c2_bound": _fraction_str(self.c2_bound),
            "holds": self.holds,
        }


def check_dual_min_weight_bounds(
    design: IncidenceStructure,
    params: DesignParams,
    budget: int | None = DEFAULT_ENUMERATION_BUDGET,
) -> DualBoundReport:
    """A zero dual has no minimum weight; its bound holds vacuously and reports None."""
    report = DualBoundReport(
        c1_dual_min_weight=_dual_minimum(bordered_code(design, 0), budget),
        c1_bound=params.dual_bound,
        c2_dual_min_weight=_dual_minimum(bordered_code(design, 1), budget),
        c2_bound=params.bordered_dual_bound,
    )
    if not report.holds:
        logger.warning(f"Dual weight bound violated for {params}: {report.as_dict()}")
    return report


@dataclass(frozen=True)
class BorderedDualReport:
    """Nonzero C3^⊥ vectors outside the three border pairs, against (b+r)/r."""

    min_weight: int | None
    bound: Fraction
    excluded_in_dual: tuple[tuple[int, int], ...]

    @property
    def holds(self) -> bool:
        return self.min_weight is None or self.min_weight >= self.bound

    def as_dict(self) -> dict:
        return {
            "min_weight": self.min_weight,
            "bound": _fraction_str(self.bound),
            "excluded_in_dual": [list(pair) for pair in self.excluded_in_dual],
            "holds": self.holds,
        }


def border_pair_vectors(v: int) -> dict[tuple[int, int], int]:
    """The weight-2 vectors supported on two of the border coordinates v+1..v+3."""
    border = (v + 1, v + 2, v + 3)
    return {pair: (1 << (pair[0] - 1)) | (1 << (pair[1] - 1)) for pair in combinations(border, 2)}


def check_C3perp_bound(
    design: IncidenceStructure,
    params: DesignParams,
    budget: int | None = DEFAULT_ENUMERATION_BUDGET,
) -> BorderedDualReport:
    c3_dual = dual(bordered_code(design, 3))
    excluded = border_pair_vectors(design.v)
    excluded_words = np.array(sorted(excluded.values()), dtype=np.uint64)

    best = None
    for chunk in codeword_chunks(c3_dual, budget):
        keep = (chunk != 0) & ~np.isin(chunk, excluded_words)
        if keep.any():
            low = int(np.bitwise_count(chunk[keep]).min())
            best = low if best is None else min(best, low)

    report = BorderedDualReport(
        min_weight=best,
        bound=params.bordered_dual_bound,
        excluded_in_dual=tuple(pair for pair, word in excluded.items() if c3_dual.contains(word)),
    )
    if not report.holds:
        logger.warning(f"Bordered dual bound violated for {params}: {report.as_dict()}")
    return report


# =============================================================================
# Parameter conditions
# =============================================================================


def check_lemma_d2_preconditions(v: int, k: int, x: int, y: int) -> bool:
    """v ≡ 5 (mod 8), k ≡ 1 (mod 4), x and y odd.

    Under these the rows of [A | 1 1 1] have weight k+3 ≡ 0 (mod 4) and
    pairwise overlaps x+3 or y+3, both even, so C3 is doubly even.
    """
    return v % 8 == 5 and k % 4 == 1 and x % 2 == 1 and y % 2 == 1


# =============================================================================
# Admissible triples
# =============================================================================


@dataclass(frozen=True)
class TripleFilterResult:
    admissible: tuple[tuple[int, int, int], ...]
    excluded_count: int

    @property
    def total(self) -> int:
        return len(self.admissible) + self.excluded_count


def admissible_triples(
    code: LinearCode,
    excluded_weight: int = 8,
    budget: int | None = DEFAULT_ENUMERATION_BUDGET,
) -> TripleFilterResult:
    """Triples T of coordinates contained in no codeword of weight ``excluded_weight``.

    The code must have minimum weight ``excluded_weight``.
    """
    n = code.length
    words = []
    for chunk in codeword_chunks(code, budget):
        weights = np.bitwise_count(chunk)
        if ((weights > 0) & (weights < excluded_weight)).any():
            raise PreconditionError(
                f"Code has codewords of weight below {excluded_weight}; it cannot host the design"
            )
        words.extend(int(w) for w in chunk[weights == excluded_weight])

    excluded: set[int] = set()
    for word in words:
        for triple in combinations(support_of(word), 3):
            excluded.add((1 << (triple[0] - 1)) | (1 << (triple[1] - 1)) | (1 << (triple[2] - 1)))

    admissible = tuple(
        triple
        for triple in combinations(range(1, n + 1), 3)
        if ((1 << (triple[0] - 1)) | (1 << (triple[1] - 1)) | (1 << (triple[2] - 1))) not in excluded
    )
    logger.debug(
        f"{len(words)} weight-{excluded_weight} words exclude {len(excluded)} of {comb(n, 3)} triples"
    )
    return TripleFilterResult(admissible=admissible, excluded_count=len(excluded))


# =============================================================================
# Pair counting over a codeword support
# =============================================================================


@dataclass(frozen=True)
class CountingInstance:
    """Σ C(i,2)·n_i = C(s,2)·λ over nonnegative n_i, i in allowed_sizes."""

    s: int
    lam: int
    allowed_sizes: frozenset[int]
    counts: dict[int, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "allowed_sizes", frozenset(self.allowed_sizes))
        if any(not 0 <= i <= self.s for i in self.allowed_sizes):
            raise PreconditionError(f"Allowed sizes {sorted(self.allowed_sizes)} leave 0..{self.s}")
        if any(c < 0 for c in self.counts.values()):
            raise PreconditionError("Block counts must be nonnegative")

    @property
    def target(self) -> int:
        return comb(self.s, 2) * self.lam


def counting_solution(inst: CountingInstance) -> dict[int, int] | None:
    """A nonnegative solution {i: n_i}, or None when none exists.

    Sizes 0 and 1 contribute nothing to the pair count and stay at zero.
    """
    target = inst.target
    sizes = sorted(i for i in inst.allowed_sizes if comb(i, 2) > 0)
    solution = {i: 0 for i in sorted(inst.allowed_sizes)}
    if target == 0:
        return solution
    if not sizes:
        return None
    step = 0
    for i in sizes:
        step = gcd(step, comb(i, 2))
    if target % step:
        return None

    # reachable[t] holds the size used last to reach pair count t
    reachable: list[int | None] = [None] * (target + 1)
    reachable[0] = 0
    for t in range(1, target + 1):
        for i in sizes:
            c = comb(i, 2)
            if c <= t and reachable[t - c] is not None:
                reachable[t] = i
                break
    if reachable[target] is None:
        return None
    t = target
    while t:
        i = reachable[t]
        solution[i] += 1
        t -= comb(i, 2)
    return solution


def counting_feasible(inst: CountingInstance) -> bool:
    return counting_solution(inst) is not None


def border_counting_instance(codeword_weight: int, border: int, lam: int) -> CountingInstance:
    """Instance for a codeword whose support contains all ``border`` coordinates.

    S is the support minus the border, so s = weight - border. Orthogonality
    to each bordered block row forces |S ∩ B| ≡ border (mod 2); |S ∩ B| = s
    would make B ∪ border minus the codeword a word of weight k + border - weight,
    so that size is left out as well.
    """
    s = codeword_weight - border
    if s < 0:
        raise PreconditionError("Border larger than the codeword weight")
    allowed = frozenset(i for i in range(s) if (i + border) % 2 == 0)
    return CountingInstance(s=s, lam=lam, allowed_sizes=allowed)


@dataclass(frozen=True)
class BorderTheoremReport:
    """The chain: C3 doubly even, minimum weight forced to the extremal value, counting fails."""

    params: DesignParams
    x: int
    y: int
    preconditions: bool
    length: int
    extremal_bound: int | None
    forced_min_weight: int | None
    counting: CountingInstance
    counting_feasible: bool

    @property
    def border_words_excluded(self) -> bool:
        """True when no weight-d codeword can contain the three border coordinates."""
        return (
            self.preconditions
            and self.forced_min_weight is not None
            and self.forced_min_weight == self.extremal_bound
            and not self.counting_feasible
        )

    def as_dict(self) -> dict:
        return {
            "design": str(self.params),
            "x": self.x,
            "y": self.y,
            "preconditions": self.preconditions,
            "length": self.length,
            "extremal_bound": self.extremal_bound,
            "forced_min_weight": self.forced_min_weight,
            "counting": {
                "s": self.counting.s,
                "lambda": self.counting.lam,
                "allowed_sizes": sorted(self.counting.allowed_sizes),
                "feasible": self.counting_feasible,
            },
            "border_words_excluded": self.border_words_excluded,
        }


def border_theorem_check(params: DesignParams, x: int, y: int, border: int = 3) -> BorderTheoremReport:
    """Run the parameter chain behind the border-triple theorem.

    Any doubly even self-dual code containing C3 has minimum weight at least
    (b+r)/r, rounded up to a multiple of 4. When that meets the extremal bound,
    a minimum-weight word through the border gives the counting instance.
    """
    n = params.v + border
    preconditions = check_lemma_d2_preconditions(params.v, params.k, x, y)
    try:
        bound = extremal_bound(n)
    except ValueError:
        bound = None
    lower = params.bordered_dual_bound
    forced = -(-lower.numerator // lower.denominator)
    forced = forced + (-forced) % 4
    if bound is not None and forced > bound:
        forced = None
    d = forced if forced is not None else (bound or 0)
    inst = border_counting_instance(d, border, params.lam)
    return BorderTheoremReport(
        params=params,
        x=x,
        y=y,
        preconditions=preconditions,
        length=n,
        extremal_bound=bound,
        forced_min_weight=forced,
        counting=inst,
        counting_feasible=counting_feasible(inst),
    )


# =============================================================================
# Parity of block overlaps
# =============================================================================


@dataclass(frozen=True)
class ParityReport:
    all_orthogonal: bool
    border_overlap: int
    overlaps: tuple[int, ...]
    implied_parity: int

    @property
    def consistent(self) -> bool:
        return self.all_orthogonal and all(o % 2 == self.implied_parity for o in self.overlaps)

    def as_dict(self) -> dict:
        return asdict(self) | {"consistent": self.consistent}


def parity_constraint_check(
    code: LinearCode, x: BitVector, block_rows: BitMatrix, border: int = 3
) -> ParityReport:
    """Overlaps |S ∩ B| of S = supp(x) minus the border with each block row.

    For x and the rows inside a self-orthogonal code, x · row = 0 forces
    |S ∩ B| ≡ |supp(x) ∩ border| (mod 2).
    """
    if not code.contains(x):
        raise MembershipError("x is not a codeword")
    for index, row in enumerate(block_rows.rows):
        if not code.contains(row):
            raise MembershipError(f"Block row {index} is not a codeword")

    n = code.length
    border_mask = ((1 << border) - 1) << (n - border)
    s_mask = x.bits & ~border_mask
    border_overlap = (x.bits & border_mask).bit_count()
    overlaps = tuple((s_mask & (row & ~border_mask)).bit_count() for row in block_rows.rows)
    all_orthogonal = all(not (x.bits & row).bit_count() & 1 for row in block_rows.rows)
    return ParityReport(
        all_orthogonal=all_orthogonal,
        border_overlap=border_overlap,
        overlaps=overlaps,
        implied_parity=border_overlap % 2,
    )
