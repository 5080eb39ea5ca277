"""Free resolutions: linear quotients, Taylor, Eliahou-Kervaire, Y-Borel and
truncated mapping cones."""
import logging
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src import config
from src.complexes import (
    BasisSymbol, BettiTable, ComplexBuilder, FreeComplex, cut_complex,
    minimize_complex
)
from src.debug import measure_time
from src.errors import (
    ComplexConstructionError, LimitExceededError, NoLinearQuotientsError,
    NotQBorelError, PreconditionError
)
from src.monomials import (
    Monomial, MonomialIdeal, contains, minimalize, quotient
)
from src.poset import Poset, chain_poset, y_poset
from src.qborel import (
    QBorelIdeal, is_q_borel, principal, principal_intersection_generators,
    q_closure
)
from src.utils_helpers import log_with_context

logger = logging.getLogger(__name__)

DESCENDING = "descending"
ASCENDING = "ascending"

QuotientSets = List[Tuple[Monomial, Tuple[int, ...]]]


def _revlex_order(gens: Sequence[Monomial], order: str) -> List[Monomial]:
    if order in (DESCENDING, "descending-revlex"):
        return sorted(gens, key=lambda g: (g.degree, g.exponents[::-1]))
    if order in (ASCENDING, "ascending-revlex"):
        return sorted(gens, key=lambda g: (
            g.degree, tuple(-e for e in g.exponents[::-1])
        ))
    raise PreconditionError(f"unknown generator order {order!r}")


def linear_quotients(I: MonomialIdeal, order: str = DESCENDING
                     ) -> QuotientSets:
    """Quotient variable sets (m_1..m_{i-1}) : m_i in the chosen order.

    Raises:
        NoLinearQuotientsError: At the first colon not generated by variables
    """
    ordered = _revlex_order(I.generators, order)
    result: QuotientSets = []
    for k, g in enumerate(ordered):
        if k == 0:
            result.append((g, ()))
            continue
        colon = quotient(minimalize(ordered[:k], I.nvars),
                         minimalize([g], I.nvars))
        if any(h.degree != 1 for h in colon.generators):
            raise NoLinearQuotientsError(k)
        result.append((g, tuple(sorted(h.support[0]
                                       for h in colon.generators))))
    return result


def has_linear_quotients(I: MonomialIdeal, order: str = DESCENDING) -> bool:
    try:
        linear_quotients(I, order)
    except NoLinearQuotientsError:
        return False
    return True


def lq_betti(I: MonomialIdeal, order: str = DESCENDING) -> BettiTable:
    """Betti numbers sum over generators of binomial(|quotient set|, i)."""
    entries: Dict[Tuple[int, Monomial], int] = {}
    n = I.nvars
    for g, S in linear_quotients(I, order):
        for i in range(len(S) + 1):
            for F in combinations(S, i):
                key = (i, g * Monomial.from_support(n, F))
                entries[key] = entries.get(key, 0) + 1
    return BettiTable(entries)


@measure_time
def lq_resolution(I: MonomialIdeal, order: str = DESCENDING) -> FreeComplex:
    """Iterated mapping cone along linear quotients.

    Generator m_k contributes Koszul symbols [m_k, F] for F inside its
    quotient set; each differential is the Koszul boundary plus an exact
    correction on earlier generators' symbols.
    """
    n = I.nvars
    quotients = linear_quotients(I, order)
    builder = ComplexBuilder(n)
    owner: Dict[Tuple[int, int], int] = {}
    index: Dict[Tuple[int, Tuple[int, ...]], int] = {}
    for k, (g, S) in enumerate(quotients):
        for i in range(len(S) + 1):
            for F in combinations(S, i):
                x_F = Monomial.from_support(n, F)
                col = builder.add_symbol(
                    BasisSymbol(("lq", g, x_F), i, g * x_F)
                )
                owner[(i, col)] = k
                index[(k, F)] = col
                if i == 0:
                    continue
                if i == 1:
                    (j,) = F
                    builder.add_entry(1, index[(k, ())], col, Fraction(1))
                    target = g * Monomial.variable(n, j)
                    earlier = next(
                        l for l in range(k)
                        if quotients[l][0].divides(target)
                    )
                    builder.add_entry(1, index[(earlier, ())], col,
                                      Fraction(-1))
                    continue
                koszul: Dict[int, Fraction] = {}
                for pos in range(i):
                    sub = F[:pos] + F[pos + 1:]
                    row = index[(k, sub)]
                    koszul[row] = Fraction((-1) ** pos)
                    builder.add_entry(i, row, col, koszul[row])
                image = builder.image(i - 1, koszul)
                target_vec = {r: -v for r, v in image.items()}
                correction = builder.solve_closing(
                    i - 1, g * x_F, target_vec,
                    lambda c, lvl=i - 1: owner[(lvl, c)] < k
                )
                for row, v in correction.items():
                    builder.add_entry(i, row, col, v)
    return builder.build(minimalize(I.generators, n))


def beg_end(I: MonomialIdeal, mu: Monomial,
            order: Optional[Sequence[int]] = None
            ) -> Tuple[Monomial, Monomial]:
    """Split mu = Beg * End with Beg a minimal generator and
    max(Beg) <= min(End).

    Args:
        I: Ideal containing mu
        mu: Monomial to split
        order: Variable indices from smallest to largest (index order by
            default)

    Raises:
        PreconditionError: If mu is not in I or no such split exists
    """
    if not contains(I, mu):
        raise PreconditionError("not in ideal")
    n = mu.nvars
    rank = {v: r for r, v in enumerate(range(n) if order is None else order)}
    current = mu
    end = Monomial.unit(n)
    while not current.is_unit():
        top = Monomial.variable(n, max(current.support, key=rank.get))
        smaller = current / top
        if not contains(I, smaller):
            break
        current = smaller
        end = end * top
    if current in I.generators:
        return current, end
    for g in I.generators:
        if g.divides(mu):
            rest = mu / g
            if g.is_unit() or rest.is_unit() or \
                    max(rank[i] for i in g.support) <= \
                    min(rank[i] for i in rest.support):
                return g, rest
    raise PreconditionError("no beginning/end split")


def _subsets(indices: Sequence[int]) -> List[Tuple[int, ...]]:
    return [F for size in range(len(indices) + 1)
            for F in combinations(indices, size)]


@measure_time
def ek_resolution(I: MonomialIdeal) -> FreeComplex:
    """Eliahou-Kervaire resolution of a Borel ideal.

    Raises:
        NotQBorelError: If I is not Borel for the chain order
    """
    n = I.nvars
    if not is_q_borel(chain_poset(n), I):
        raise NotQBorelError("not Borel")
    builder = ComplexBuilder(n)
    index: Dict[Tuple[Monomial, Tuple[int, ...]], int] = {}
    symbols: List[Tuple[Monomial, Tuple[int, ...]]] = []
    for m in I.generators:
        for alpha in _subsets(range(max(m.max_index(), 0))):
            x_alpha = Monomial.from_support(n, alpha)
            index[(m, alpha)] = builder.add_symbol(
                BasisSymbol(("ek", m, x_alpha), len(alpha), m * x_alpha)
            )
            symbols.append((m, alpha))

    def beginning(mu: Monomial) -> Monomial:
        return beg_end(I, mu)[0]

    for m, alpha in symbols:
        _ek_terms(builder, index, beginning, m, alpha, len(alpha),
                  index[(m, alpha)])
    return builder.build(I)


def _ek_terms(builder: ComplexBuilder,
              index: Dict[Tuple[Monomial, Tuple[int, ...]], int],
              beginning: Callable[[Monomial], Optional[Monomial]],
              m: Monomial, alpha: Tuple[int, ...],
              level: int, col: int) -> None:
    """Add the Eliahou-Kervaire boundary of [m, alpha] to column col.

    ``beginning`` returns Beg(mu), or None when mu has no split.
    """
    n = m.nvars
    for pos, a in enumerate(alpha):
        sign = Fraction((-1) ** pos)
        sub = alpha[:pos] + alpha[pos + 1:]
        builder.add_entry(level, index[(m, sub)], col, sign)
        beg = beginning(m * Monomial.variable(n, a))
        if beg is not None and (beg, sub) in index:
            builder.add_entry(level, index[(beg, sub)], col, -sign)


def _k_exponent(I: MonomialIdeal, m: Monomial, y: int, z: int
                ) -> Optional[int]:
    """Least k >= 1 with (m/z) y^k in I, or None."""
    n = m.nvars
    base = m / Monomial.variable(n, z)
    top = max([g.exponents[y] for g in I.generators] + [1])
    for k in range(1, top + 1):
        if contains(I, base * Monomial.variable(n, y, k)):
            return k
    return None


def _y_split(I: MonomialIdeal, mu: Monomial, t: int
             ) -> Optional[Tuple[Monomial, Monomial]]:
    """(Beg(mu), End(mu)) for a Y-Borel ideal.

    y and z are incomparable, so when index order has no split the linear
    extension placing z before y is tried. None if neither splits mu.
    """
    for order in (None, list(range(t)) + [t + 1, t]):
        try:
            return beg_end(I, mu, order)
        except PreconditionError:
            continue
    logger.debug("No beginning/end split in either order",
                 **log_with_context(monomial=mu.exponents, t=t))
    return None


@measure_time
def y_resolution(t: int, I: MonomialIdeal) -> FreeComplex:
    """Minimal resolution of an ideal Borel for x_1 < ... < x_t < y, x_t < z.

    Besides the symbols [m, alpha], generators m divisible by z with a
    finite k_m carry [m, alpha y^k_m] one homological degree higher.

    Raises:
        NotQBorelError: If I is not Y-Borel
    """
    Y = y_poset(t)
    if I.nvars != Y.n:
        raise PreconditionError(
            f"the Y poset with t={t} needs {Y.n} variables"
        )
    if not is_q_borel(Y, I):
        raise NotQBorelError("not Y-Borel")
    n = Y.n
    y, z = t, t + 1
    builder = ComplexBuilder(n)
    basic: Dict[Tuple[Monomial, Tuple[int, ...]], int] = {}
    extended: Dict[Tuple[Monomial, Tuple[int, ...]], int] = {}
    k_of: Dict[Monomial, Optional[int]] = {}
    for m in I.generators:
        lower = [i for i in range(t) if i < m.max_index()]
        for alpha in _subsets(lower):
            x_alpha = Monomial.from_support(n, alpha)
            basic[(m, alpha)] = builder.add_symbol(
                BasisSymbol(("y", m, x_alpha), len(alpha), m * x_alpha)
            )
    for m in I.generators:
        k_of[m] = _k_exponent(I, m, y, z) if m.exponents[z] else None
        if k_of[m] is None:
            continue
        y_k = Monomial.variable(n, y, k_of[m])
        for alpha in _subsets(range(t)):
            x_alpha = Monomial.from_support(n, alpha)
            extended[(m, alpha)] = builder.add_symbol(
                BasisSymbol(("y", m, x_alpha * y_k), len(alpha) + 1,
                            m * x_alpha * y_k)
            )

    def beginning(mu: Monomial) -> Optional[Monomial]:
        split = _y_split(I, mu, t)
        return split[0] if split is not None else None

    for (m, alpha), col in basic.items():
        _ek_terms(builder, basic, beginning, m, alpha, len(alpha), col)
    for (m, alpha), col in extended.items():
        level = len(alpha) + 1
        k = k_of[m]
        tail = Fraction((-1) ** len(alpha))
        for pos, a in enumerate(alpha):
            sign = Fraction((-1) ** pos)
            sub = alpha[:pos] + alpha[pos + 1:]
            builder.add_entry(level, extended[(m, sub)], col, sign)
            beg = beginning(m * Monomial.variable(n, a))
            k_beg = k_of.get(beg) if beg is not None else None
            if k_beg is not None and k_beg <= k and (beg, sub) in extended:
                builder.add_entry(level, extended[(beg, sub)], col, -sign)
        builder.add_entry(level, basic[(m, alpha)], col, tail)
        beg = beginning(m * Monomial.variable(n, y, k))
        if beg is not None and (beg, alpha) in basic:
            builder.add_entry(level, basic[(beg, alpha)], col, -tail)
    logger.debug(
        f"Y-resolution with {len(basic)} plain and {len(extended)} "
        f"y-extended symbols",
        **log_with_context(t=t)
    )
    return builder.build(I)


def end_structure_check(t: int, I: MonomialIdeal) -> bool:
    """Check that End(m), taken in I : z, is 1, x_max(m) or a power of y
    for every minimal generator m of the part of I free of z."""
    Y = y_poset(t)
    if not is_q_borel(Y, I):
        raise NotQBorelError("not Y-Borel")
    n = Y.n
    y, z = t, t + 1
    colon = quotient(I, minimalize([Monomial.variable(n, z)], n))
    free_of_z = minimalize(
        [g for g in I.generators if not g.exponents[z]], n
    )
    for m in free_of_z.generators:
        split = _y_split(colon, m, t)
        if split is None:
            return False
        end = split[1]
        if end.is_unit() or end.support == (y,):
            continue
        if end == Monomial.variable(n, m.max_index()):
            continue
        logger.info("End structure violated",
                    **log_with_context(generator=m.exponents,
                                       end=end.exponents))
        return False
    return True


@measure_time
def taylor_resolution(I: MonomialIdeal) -> FreeComplex:
    """Taylor complex on the minimal generators."""
    n = I.nvars
    gens = I.generators
    builder = ComplexBuilder(n)
    index: Dict[Tuple[int, ...], int] = {}
    for size in range(1, len(gens) + 1):
        for S in combinations(range(len(gens)), size):
            lcm = gens[S[0]]
            for k in S[1:]:
                lcm = lcm.lcm(gens[k])
            col = builder.add_symbol(BasisSymbol(
                ("taylor",) + tuple(gens[k] for k in S), size - 1, lcm
            ))
            index[S] = col
            if size == 1:
                continue
            for pos in range(size):
                builder.add_entry(size - 1, index[S[:pos] + S[pos + 1:]],
                                  col, Fraction((-1) ** pos))
    return builder.build(I)


class _ConeBudget:
    def __init__(self, limit: int):
        self.limit = limit
        self.nodes = 0

    def spend(self) -> None:
        self.nodes += 1
        if self.nodes > self.limit:
            logger.error("Mapping cone recursion limit exceeded",
                         **log_with_context(limit=self.limit))
            raise LimitExceededError(
                f"mapping cone recursion exceeded {self.limit} nodes"
            )


def _cone(G: FreeComplex, H: FreeComplex, K: FreeComplex,
          nvars: int) -> FreeComplex:
    """Mapping cone F = G + H + K[-1] over the map K -> G + H."""
    builder = ComplexBuilder(nvars)
    top = max(G.length, H.length, K.length + 1)
    offsets: List[Tuple[int, int, int]] = []
    for i in range(top):
        g_off = len(builder.levels[i]) if i < len(builder.levels) else 0
        for s in (G.levels[i] if i < G.length else []):
            builder.add_symbol(s.relabel("G"))
        h_off = g_off + G.rank(i)
        for s in (H.levels[i] if i < H.length else []):
            builder.add_symbol(s.relabel("H"))
        k_off = h_off + H.rank(i)
        for s in (K.levels[i - 1] if 0 < i <= K.length else []):
            builder.add_symbol(s.relabel("K", 1))
        offsets.append((g_off, h_off, k_off))
    for i in range(1, top):
        for source, block in ((G, 0), (H, 1)):
            if i >= source.length:
                continue
            row_off, col_off = offsets[i - 1][block], offsets[i][block]
            for (r, c), v in source.differentials[i].items():
                builder.add_entry(i, r + row_off, c + col_off, v)
    for i in range(1, top):
        g_off, h_off, k_off = offsets[i]
        if i - 1 >= K.length:
            continue
        for kc, symbol in enumerate(K.levels[i - 1]):
            col = k_off + kc
            b = symbol.multidegree
            if i == 1:
                g = _first_dividing(G.levels[0] if G.length else [], b)
                h = _first_dividing(H.levels[0] if H.length else [], b)
                if g is None or h is None:
                    raise ComplexConstructionError(
                        f"no level-0 lift in multidegree {b.exponents}"
                    )
                builder.add_entry(1, offsets[0][0] + g, col, Fraction(1))
                builder.add_entry(1, offsets[0][1] + h, col, Fraction(-1))
                continue
            partial: Dict[int, Fraction] = {}
            for r, v in K.column(i - 1, kc).items():
                row = offsets[i - 1][2] + r
                partial[row] = -v
                builder.add_entry(i, row, col, -v)
            # the K block of the image vanishes because d_K d_K = 0
            image = builder.image(i - 1, partial)
            correction = builder.solve_closing(
                i - 1, b, {r: -v for r, v in image.items()},
                lambda c, stop=offsets[i - 1][2]: c < stop
            )
            for row, v in correction.items():
                builder.add_entry(i, row, col, v)
    return builder.build()


def _first_dividing(symbols: Sequence[BasisSymbol], b: Monomial
                    ) -> Optional[int]:
    for k, s in enumerate(symbols):
        if s.multidegree.divides(b):
            return k
    return None


@measure_time
def truncated_resolution(Q: Poset, I: QBorelIdeal, d: int,
                         cancel: bool = False,
                         internal_bound: Optional[int] = None
                         ) -> FreeComplex:
    """Resolve a Q-Borel ideal by iterated mapping cones, truncated at d.

    Q-generators of degree above d are dropped. The recursion splits off a
    minimal-degree Q-generator m, resolves Q(m), the rest J and the list of
    Q-generators of the principal intersections with Q(m), and joins them
    in a mapping cone. Every complex is cut to total degree at most
    ``internal_bound`` (d + n by default), so the result is exact in all
    multidegrees up to that bound.

    Args:
        Q: Poset of the ideal
        I: Q-Borel ideal
        d: Truncation degree
        cancel: Cancel unit entries afterwards
        internal_bound: Degree cut for the recursion

    Raises:
        PreconditionError: If d is below every Q-generator degree
        LimitExceededError: If the recursion exceeds RECURSION_LIMIT nodes
    """
    if not I.q_generators or d < min(g.degree for g in I.q_generators):
        raise PreconditionError(
            "truncation degree is below the minimal Q-generator degree"
        )
    bound = d + Q.n if internal_bound is None else internal_bound
    gens = [g for g in I.q_generators if g.degree <= d]
    budget = _ConeBudget(config.RECURSION_LIMIT)
    memo: Dict[Tuple[Monomial, ...], FreeComplex] = {}

    def resolve(items: Tuple[Monomial, ...]) -> FreeComplex:
        items = tuple(g for g in items if g.degree <= bound)
        if items in memo:
            return memo[items]
        budget.spend()
        if not items:
            result = FreeComplex([], [], Q.n)
        elif len(items) == 1:
            result = cut_complex(
                lq_resolution(principal(Q, items[0]).expansion), bound
            )
        else:
            low = min(g.degree for g in items)
            pos = next(k for k, g in enumerate(items) if g.degree == low)
            m = items[pos]
            rest = items[:pos] + items[pos + 1:]
            meet: List[Monomial] = []
            for t in rest:
                meet.extend(principal_intersection_generators(Q, t, m))
            result = cut_complex(
                _cone(resolve((m,)), resolve(rest), resolve(tuple(meet)),
                      Q.n),
                bound,
            )
        memo[items] = result
        return result

    F = resolve(tuple(gens))
    F.ideal = q_closure(Q, gens).expansion
    F.degree_cap = bound
    logger.debug(
        f"Truncated resolution with ranks {F.ranks()}",
        **log_with_context(d=d, bound=bound, nodes=budget.nodes)
    )
    if cancel:
        F = minimize_complex(F)
    return F


__all__ = [
    "DESCENDING", "ASCENDING", "linear_quotients", "has_linear_quotients",
    "lq_betti", "lq_resolution", "beg_end", "ek_resolution", "y_resolution",
    "end_structure_check", "taylor_resolution", "truncated_resolution",
]
