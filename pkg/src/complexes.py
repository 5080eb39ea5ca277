"""Multigraded free complexes, Betti tables and exact verification."""
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from src import config
from src.debug import measure_time
from src.errors import ComplexConstructionError, PreconditionError
from src.monomials import (
    Monomial, MonomialIdeal, VariableSet, contains, monomials_up_to
)
from src.utils.linalg import rank, solve
from src.utils_helpers import log_with_context

logger = logging.getLogger(__name__)

Entries = Dict[Tuple[int, int], Fraction]


@dataclass(frozen=True)
class BasisSymbol:
    """Free generator of a complex, tagged with its homological degree.

    ``label`` is a hashable tag such as ("ek", m, alpha) or a cone wrapper
    ("G", inner_label).
    """

    label: Tuple[Any, ...]
    hom_degree: int
    multidegree: Monomial

    def relabel(self, prefix: str, shift: int = 0) -> "BasisSymbol":
        return BasisSymbol((prefix, self.label), self.hom_degree + shift,
                           self.multidegree)


@dataclass
class FreeComplex:
    """Complex of free modules resolving ``ideal`` (when it is a resolution).

    ``differentials[i]`` maps level i to level i-1 and holds scalar entries
    keyed (row, col); the monomial of an entry is the quotient of the
    column's multidegree by the row's. ``differentials[0]`` is empty.
    ``degree_cap`` marks a complex cut to symbols of total degree at most
    the cap.
    """

    levels: List[List[BasisSymbol]]
    differentials: List[Entries]
    nvars: int
    ideal: Optional[MonomialIdeal] = None
    degree_cap: Optional[int] = None

    @property
    def length(self) -> int:
        return len(self.levels)

    def rank(self, i: int) -> int:
        return len(self.levels[i]) if 0 <= i < len(self.levels) else 0

    def ranks(self) -> List[int]:
        return [len(level) for level in self.levels]

    def entry_monomial(self, i: int, row: int, col: int) -> Monomial:
        return self.levels[i][col].multidegree / \
            self.levels[i - 1][row].multidegree

    def column(self, i: int, col: int) -> Dict[int, Fraction]:
        return {r: v for (r, c), v in self.differentials[i].items()
                if c == col}

    def betti_table(self) -> "BettiTable":
        """Symbol counts, which are Betti numbers for a minimal complex."""
        counts: Dict[Tuple[int, Monomial], int] = defaultdict(int)
        for i, level in enumerate(self.levels):
            for s in level:
                counts[(i, s.multidegree)] += 1
        return BettiTable(dict(counts))

    def has_unit_entries(self) -> bool:
        return any(
            self.levels[i][c].multidegree == self.levels[i - 1][r].multidegree
            for i in range(1, len(self.levels))
            for (r, c), v in self.differentials[i].items() if v != 0
        )

    def to_dict(self, variables: Optional[VariableSet] = None
                ) -> Dict[str, Any]:
        """JSON-ready symbols and sparse differential triples."""
        names = variables or VariableSet.default(self.nvars)
        return {
            "levels": [
                [{"label": _format_label(s.label, names),
                  "multidegree": names.format_monomial(s.multidegree)}
                 for s in level]
                for level in self.levels
            ],
            "differentials": [
                [i, r, c, str(v)]
                for i in range(1, len(self.levels))
                for (r, c), v in sorted(self.differentials[i].items())
            ],
        }


def _format_label(label: Any, names: VariableSet) -> str:
    if isinstance(label, Monomial):
        return names.format_monomial(label)
    if isinstance(label, tuple):
        return "[" + ",".join(_format_label(x, names) for x in label) + "]"
    return str(label)


@dataclass(frozen=True)
class BettiTable:
    """Multigraded Betti numbers keyed (homological degree, multidegree)."""

    entries: Dict[Tuple[int, Monomial], int] = field(default_factory=dict)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.nonzero() == other.nonzero()

    def __hash__(self) -> int:
        return hash(frozenset(self.nonzero().items()))

    def nonzero(self) -> Dict[Tuple[int, Monomial], int]:
        return {k: v for k, v in self.entries.items() if v}

    def get(self, i: int, b: Monomial) -> int:
        return self.entries.get((i, b), 0)

    def graded(self) -> Dict[Tuple[int, int], int]:
        """Coarsen to (homological degree, total degree)."""
        table: Dict[Tuple[int, int], int] = defaultdict(int)
        for (i, b), v in self.nonzero().items():
            table[(i, b.degree)] += v
        return dict(table)

    def totals(self) -> List[int]:
        nonzero = self.nonzero()
        if not nonzero:
            return []
        top = max(i for i, _ in nonzero)
        sums = [0] * (top + 1)
        for (i, _), v in nonzero.items():
            sums[i] += v
        return sums

    def projective_dimension(self) -> int:
        """pd(S/I) for a table describing a resolution of I."""
        return len(self.totals())

    def is_linear(self) -> bool:
        graded = self.graded()
        starts = {j - i for i, j in graded}
        return len(starts) <= 1

    def to_dict(self) -> Dict[str, Dict[str, int]]:
        table: Dict[str, Dict[str, int]] = {}
        for (i, j), v in sorted(self.graded().items()):
            table.setdefault(str(i), {})[str(j)] = v
        return table


@dataclass
class Certificate:
    """Outcome of :func:`verify_complex`."""

    ok: bool
    mode: str
    checked: int = 0
    failure: Optional[Tuple[int, Monomial, int]] = None
    homology: Dict[Tuple[int, Monomial], int] = field(default_factory=dict)
    message: str = ""


class ComplexBuilder:
    """Incremental construction of a complex with exact closing lifts."""

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.levels: List[List[BasisSymbol]] = []
        self.differentials: List[Entries] = []

    def _ensure_level(self, i: int) -> None:
        while len(self.levels) <= i:
            self.levels.append([])
            self.differentials.append({})

    def add_symbol(self, symbol: BasisSymbol) -> int:
        self._ensure_level(symbol.hom_degree)
        self.levels[symbol.hom_degree].append(symbol)
        return len(self.levels[symbol.hom_degree]) - 1

    def add_entry(self, i: int, row: int, col: int, value: Fraction) -> None:
        if value == 0:
            return
        row_md = self.levels[i - 1][row].multidegree
        col_md = self.levels[i][col].multidegree
        if not row_md.divides(col_md):
            raise ComplexConstructionError(
                f"entry at level {i} is not homogeneous"
            )
        entries = self.differentials[i]
        total = entries.get((row, col), Fraction(0)) + value
        if total:
            entries[(row, col)] = total
        else:
            entries.pop((row, col), None)

    def image(self, i: int, vector: Dict[int, Fraction]
              ) -> Dict[int, Fraction]:
        """Apply d_i to a scalar vector on level-i symbols."""
        out: Dict[int, Fraction] = defaultdict(Fraction)
        if i == 0 or not vector:
            return {}
        for (r, c), v in self.differentials[i].items():
            if c in vector:
                out[r] += v * vector[c]
        return {r: v for r, v in out.items() if v}

    def solve_closing(self, i: int, b: Monomial,
                      target: Dict[int, Fraction],
                      allowed: Callable[[int], bool]) -> Dict[int, Fraction]:
        """Find c on allowed level-i symbols of multidegree dividing b
        with d_i(c) = target.

        Raises:
            ComplexConstructionError: If no such c exists
        """
        if not target:
            return {}
        self._ensure_level(i)
        cols = [c for c, s in enumerate(self.levels[i])
                if allowed(c) and s.multidegree.divides(b)]
        rows = sorted(
            {r for r, s in enumerate(self.levels[i - 1])
             if s.multidegree.divides(b)} | set(target)
        )
        row_pos = {r: k for k, r in enumerate(rows)}
        col_pos = {c: k for k, c in enumerate(cols)}
        matrix = [[Fraction(0)] * len(cols) for _ in rows]
        for (r, c), v in self.differentials[i].items():
            if c in col_pos and r in row_pos:
                matrix[row_pos[r]][col_pos[c]] = v
        rhs = [target.get(r, Fraction(0)) for r in rows]
        x = solve(matrix, len(cols), rhs)
        if x is None:
            logger.error(
                "Mapping cone lift has no solution",
                **log_with_context(level=i, multidegree=b.exponents)
            )
            raise ComplexConstructionError(
                f"no lift at level {i} in multidegree {b.exponents}"
            )
        return {c: v for c, v in zip(cols, x) if v}

    def build(self, ideal: Optional[MonomialIdeal] = None,
              degree_cap: Optional[int] = None) -> FreeComplex:
        while self.levels and not self.levels[-1]:
            self.levels.pop()
            self.differentials.pop()
        return FreeComplex(
            [list(level) for level in self.levels],
            [dict(d) for d in self.differentials],
            self.nvars, ideal, degree_cap,
        )


def cut_complex(F: FreeComplex, cap: int) -> FreeComplex:
    """Subcomplex on the symbols of total degree at most ``cap``."""
    keep = [
        [k for k, s in enumerate(level) if s.multidegree.degree <= cap]
        for level in F.levels
    ]
    remap = [{old: new for new, old in enumerate(k)} for k in keep]
    levels = [[F.levels[i][k] for k in keep[i]] for i in range(F.length)]
    differentials: List[Entries] = [{}]
    for i in range(1, F.length):
        differentials.append({
            (remap[i - 1][r], remap[i][c]): v
            for (r, c), v in F.differentials[i].items()
            if c in remap[i] and r in remap[i - 1]
        })
    while levels and not levels[-1]:
        levels.pop()
        differentials.pop()
    cap = cap if F.degree_cap is None else min(cap, F.degree_cap)
    return FreeComplex(levels, differentials, F.nvars, F.ideal, cap)


def _check_d2(F: FreeComplex) -> Certificate:
    for i in range(1, F.length):
        for (r, c) in F.differentials[i]:
            if not F.levels[i - 1][r].multidegree.divides(
                    F.levels[i][c].multidegree):
                return Certificate(
                    False, "d2", failure=(i, F.levels[i][c].multidegree, 1),
                    message=f"entry ({r}, {c}) at level {i} not homogeneous"
                )
    # entry monomials are fixed by homogeneity, so the augmentation kills
    # a level-1 column iff its coefficients sum to zero
    checked = 0
    if F.length > 1:
        sums: Dict[int, Fraction] = defaultdict(Fraction)
        for (_, c), v in F.differentials[1].items():
            sums[c] += v
        checked += len(F.differentials[1])
        for c, total in sorted(sums.items()):
            if total != 0:
                return Certificate(
                    False, "d2", checked,
                    failure=(1, F.levels[1][c].multidegree, 1),
                    message=f"augmentation of column {c} at level 1 "
                            f"is nonzero"
                )
    for i in range(2, F.length):
        upper = F.differentials[i]
        lower = F.differentials[i - 1]
        by_col: Dict[int, Dict[int, Fraction]] = defaultdict(dict)
        for (r, c), v in lower.items():
            by_col[c][r] = v
        composite: Dict[Tuple[int, int], Fraction] = defaultdict(Fraction)
        for (mid, c), v in upper.items():
            for r, w in by_col.get(mid, {}).items():
                composite[(r, c)] += v * w
        checked += len(upper)
        for (r, c), v in composite.items():
            if v != 0:
                return Certificate(
                    False, "d2", checked,
                    failure=(i, F.levels[i][c].multidegree, 1),
                    message=f"d{i - 1} d{i} is nonzero at column {c}"
                )
    return Certificate(True, "d2", checked, message="d^2 = 0")


def _restricted_rank(F: FreeComplex, i: int, rows: Sequence[int],
                     cols: Sequence[int]) -> int:
    if i <= 0 or i >= F.length or not rows or not cols:
        return 0
    row_pos = {r: k for k, r in enumerate(rows)}
    col_pos = {c: k for k, c in enumerate(cols)}
    matrix = [[Fraction(0)] * len(cols) for _ in rows]
    for (r, c), v in F.differentials[i].items():
        if r in row_pos and c in col_pos:
            matrix[row_pos[r]][col_pos[c]] = v
    return rank(matrix, len(cols))


def _check_exactness(F: FreeComplex, bound: int,
                     strand: Optional[int]) -> Certificate:
    if F.ideal is None:
        raise PreconditionError("exactness needs the resolved ideal")
    if F.degree_cap is not None:
        bound = min(bound, F.degree_cap)
    for s in F.levels[0] if F.levels else []:
        if not contains(F.ideal, s.multidegree):
            return Certificate(False, "exactness",
                               failure=(0, s.multidegree, 1),
                               message="level-0 symbol outside the ideal")
    rank_cache: Dict[Tuple[int, Tuple[int, ...], Tuple[int, ...]], int] = {}
    homology: Dict[Tuple[int, Monomial], int] = {}
    checked = 0
    for b in monomials_up_to(F.nvars, bound):
        supported = [
            tuple(k for k, s in enumerate(level)
                  if s.multidegree.divides(b))
            for level in F.levels
        ]

        def ranked(i: int) -> int:
            if i <= 0 or i >= F.length:
                return 0
            key = (i, supported[i - 1], supported[i])
            if key not in rank_cache:
                rank_cache[key] = _restricted_rank(
                    F, i, supported[i - 1], supported[i]
                )
            return rank_cache[key]

        checked += 1
        for i in range(F.length):
            if strand is not None and b.degree - i > strand:
                continue
            dim = len(supported[i]) - ranked(i) - ranked(i + 1)
            expected = 0
            if i == 0:
                expected = 1 if contains(F.ideal, b) else 0
            if dim != expected:
                homology[(i, b)] = dim - expected
                return Certificate(
                    False, "exactness", checked, failure=(i, b, dim),
                    homology=homology,
                    message=f"homology of dimension {dim} at level {i}"
                )
    return Certificate(True, "exactness", checked,
                       message=f"exact through degree {bound}")


@measure_time
def verify_complex(F: FreeComplex, mode: str = "d2",
                   bound: Optional[int] = None,
                   strand: Optional[int] = None) -> Certificate:
    """Certify a complex exactly.

    Args:
        F: Complex to check
        mode: "d2" for d o d = 0 and homogeneity, "exactness" for per
            multidegree homology up to ``bound``
        bound: Total degree bound (config DEGREE_BOUND)
        strand: Only check bidegrees (i, j) with j - i <= strand

    Returns:
        Certificate carrying the first failure, if any
    """
    if mode == "d2":
        certificate = _check_d2(F)
    elif mode == "exactness":
        bound = config.DEGREE_BOUND if bound is None else bound
        certificate = _check_d2(F)
        if certificate.ok:
            certificate = _check_exactness(F, bound, strand)
    else:
        raise PreconditionError(f"unknown verification mode {mode!r}")
    log = logger.debug if certificate.ok else logger.warning
    log(f"Verification {mode}: {certificate.message}",
        **log_with_context(ranks=F.ranks(), checked=certificate.checked))
    return certificate


def lcm_closure(I: MonomialIdeal, bound: int) -> List[Monomial]:
    """Least common multiples of generator subsets of degree <= bound."""
    found = {g for g in I.generators if g.degree <= bound}
    frontier = set(found)
    while frontier:
        added = set()
        for a in frontier:
            for g in I.generators:
                m = a.lcm(g)
                if m.degree <= bound and m not in found:
                    added.add(m)
        found |= added
        frontier = added
    return sorted(found, key=Monomial.sort_key)


def _reduced_homology(faces: Sequence[Tuple[int, ...]]
                      ) -> Dict[int, int]:
    """dim of reduced homology H~_k over Q for a complex given by its faces."""
    by_size: Dict[int, List[Tuple[int, ...]]] = defaultdict(list)
    for f in faces:
        by_size[len(f)].append(f)
    index = {size: {f: k for k, f in enumerate(fs)}
             for size, fs in by_size.items()}
    top = max(by_size) if by_size else -1
    boundary_ranks: Dict[int, int] = {}
    for size in range(1, top + 1):
        rows = by_size.get(size - 1, [])
        cols = by_size.get(size, [])
        matrix = [[Fraction(0)] * len(cols) for _ in rows]
        for c, face in enumerate(cols):
            for pos in range(len(face)):
                sub = face[:pos] + face[pos + 1:]
                r = index.get(size - 1, {}).get(sub)
                if r is not None:
                    matrix[r][c] = Fraction((-1) ** pos)
        boundary_ranks[size] = rank(matrix, len(cols))
    # H~_k lives on faces with k + 1 vertices
    return {
        size - 1: len(by_size.get(size, []))
        - boundary_ranks.get(size, 0) - boundary_ranks.get(size + 1, 0)
        for size in range(0, top + 1)
    }


def upper_koszul_faces(I: MonomialIdeal, b: Monomial
                       ) -> List[Tuple[int, ...]]:
    """Squarefree w inside supp(b) with x^b / x^w in I."""
    support = b.support
    faces = []
    for size in range(len(support) + 1):
        for w in combinations(support, size):
            wm = Monomial.from_support(b.nvars, w)
            if contains(I, b / wm):
                faces.append(w)
    return faces


@measure_time
def koszul_betti(I: MonomialIdeal, bound: Optional[int] = None
                 ) -> BettiTable:
    """Multigraded Betti numbers of I from upper Koszul complexes.

    Raises:
        PreconditionError: If bound is below the largest generator degree
    """
    bound = config.DEGREE_BOUND if bound is None else bound
    if bound < I.max_degree():
        raise PreconditionError(
            f"bound {bound} is below the generator degree {I.max_degree()}"
        )
    entries: Dict[Tuple[int, Monomial], int] = {}
    for b in lcm_closure(I, bound):
        for k, dim in _reduced_homology(upper_koszul_faces(I, b)).items():
            if dim:
                entries[(k + 1, b)] = dim
    logger.debug(f"Koszul oracle found {sum(entries.values())} Betti numbers",
                 **log_with_context(bound=bound))
    return BettiTable(entries)


def minimize_complex(F: FreeComplex) -> FreeComplex:
    """Cancel unit entries by Gaussian elimination until none remain."""
    levels = [list(level) for level in F.levels]
    diffs = [dict(d) for d in F.differentials]
    cancelled = 0
    while True:
        pivot = _find_unit(levels, diffs)
        if pivot is None:
            break
        i, r, c = pivot
        u = diffs[i][(r, c)]
        col_c = {rr: v for (rr, cc), v in diffs[i].items() if cc == c}
        row_r = {cc: v for (rr, cc), v in diffs[i].items() if rr == r}
        updated: Entries = defaultdict(Fraction)
        for (rr, cc), v in diffs[i].items():
            if rr != r and cc != c:
                updated[(rr, cc)] += v
        for rr, a in col_c.items():
            if rr == r:
                continue
            for cc, w in row_r.items():
                if cc != c:
                    updated[(rr, cc)] -= a * w / u
        diffs[i] = {k: v for k, v in updated.items() if v}
        if i + 1 < len(levels):
            diffs[i + 1] = {k: v for k, v in diffs[i + 1].items()
                            if k[0] != c}
        if i - 1 >= 1:
            diffs[i - 1] = {k: v for k, v in diffs[i - 1].items()
                            if k[1] != r}
        _drop_symbol(levels, diffs, i, c)
        _drop_symbol(levels, diffs, i - 1, r)
        cancelled += 1
    while levels and not levels[-1]:
        levels.pop()
        diffs.pop()
    logger.debug(f"Cancelled {cancelled} unit pairs",
                 **log_with_context(ranks=[len(x) for x in levels]))
    return FreeComplex(levels, diffs, F.nvars, F.ideal, F.degree_cap)


def _find_unit(levels: List[List[BasisSymbol]], diffs: List[Entries]
               ) -> Optional[Tuple[int, int, int]]:
    for i in range(1, len(levels)):
        for (r, c), v in sorted(diffs[i].items()):
            if v and levels[i][c].multidegree == levels[i - 1][r].multidegree:
                return i, r, c
    return None


def _drop_symbol(levels: List[List[BasisSymbol]], diffs: List[Entries],
                 i: int, k: int) -> None:
    """Remove symbol k of level i and renumber the adjacent differentials."""
    del levels[i][k]

    def shift(x: int) -> int:
        return x - 1 if x > k else x

    diffs[i] = {(r, shift(c)): v for (r, c), v in diffs[i].items()}
    if i + 1 < len(levels):
        diffs[i + 1] = {(shift(r), c): v
                        for (r, c), v in diffs[i + 1].items()}
