"""Extension problems 0 -> A -> G -> C -> 0 of finitely generated abelian
groups: Ext^1 computation, enumeration of the possible middle groups, and
evidence-driven resolution to a single middle group.

Enumeration contract: candidates have free rank rk(A) + rk(C) and torsion
order |A_t| * |C_t|.  Under that contract the candidates are exactly
Z^{rk A + rk C} (+) T where T is a torsion middle of (A_t, C_t), and the
torsion problem decomposes prime by prime.  At a prime p, a p-group of type
lambda admits a subgroup of type mu with quotient of type nu if and only if
the Littlewood-Richardson coefficient c^lambda_{mu,nu} is positive (Hall);
positivity is decided by an exhaustive skew-tableau search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache, reduce
from math import gcd

from .abelian import FinAbGroup


class ExtensionError(Exception):
    pass


class EnumerationBoundError(ExtensionError):
    """Torsion order of the problem exceeds the enumeration bound."""


class UnresolvedExtensionError(ExtensionError):
    """Evidence does not pin down a unique middle group."""

    def __init__(self, context: str, candidates, detail: str):
        self.context = context
        self.candidates = tuple(candidates)
        super().__init__(
            f"unresolved extension ({context}): {detail}; candidates: "
            + ", ".join(str(c) for c in self.candidates)
        )


DEFAULT_BOUND = 2**20


# ---------------------------------------------------------------------------
# Ext^1
# ---------------------------------------------------------------------------


def ext_group(c: FinAbGroup, a: FinAbGroup) -> FinAbGroup:
    """Ext^1(C, A) for finitely generated abelian C, A.

    Additive in both arguments; Ext(Z, -) = 0, Ext(Z/n, Z) = Z/n,
    Ext(Z/n, Z/m) = Z/gcd(n, m).
    """
    orders = []
    for n in c.torsion:
        orders.extend([n] * a.free_rank)
        orders.extend(gcd(n, m) for m in a.torsion)
    return FinAbGroup.from_factors(orders)


# ---------------------------------------------------------------------------
# Partitions and Littlewood-Richardson positivity
# ---------------------------------------------------------------------------


def partitions(n: int, max_part: int | None = None):
    """All partitions of n (descending tuples), lexicographically descending."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def conjugate_partition(lam) -> tuple[int, ...]:
    lam = tuple(lam)
    if not lam:
        return ()
    return tuple(sum(1 for x in lam if x > j) for j in range(lam[0]))


@lru_cache(maxsize=None)
def lr_positive(lam: tuple, mu: tuple, nu: tuple) -> bool:
    """Whether c^lam_{mu, nu} > 0, by exhaustive skew LR-tableau search."""
    lam, mu, nu = tuple(lam), tuple(mu), tuple(nu)
    if sum(lam) != sum(mu) + sum(nu):
        return False
    mu_p = mu + (0,) * (len(lam) - len(mu))
    if len(mu) > len(lam) or any(m > l for m, l in zip(mu, lam)):
        return False
    if not nu:
        return lam == mu
    # cells of lam/mu in reading order: rows top to bottom, right to left
    cells = []
    for i, l in enumerate(lam):
        for j in range(l - 1, mu_p[i] - 1, -1):
            cells.append((i, j))
    grid: dict[tuple[int, int], int] = {}
    counts = [0] * (len(nu) + 1)

    def fill(idx: int) -> bool:
        if idx == len(cells):
            return True
        i, j = cells[idx]
        right = grid.get((i, j + 1))
        above = grid.get((i - 1, j))
        for v in range(1, len(nu) + 1):
            if counts[v] >= nu[v - 1]:
                continue
            if right is not None and v > right:
                continue
            if above is not None and v <= above:
                continue
            if v > 1 and counts[v] >= counts[v - 1]:
                continue  # lattice word condition
            grid[(i, j)] = v
            counts[v] += 1
            if fill(idx + 1):
                del grid[(i, j)]
                counts[v] -= 1
                return True
            del grid[(i, j)]
            counts[v] -= 1
        return False

    return fill(0)


# ---------------------------------------------------------------------------
# Candidate enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionCandidateSet:
    sub: FinAbGroup
    quot: FinAbGroup
    candidates: tuple[FinAbGroup, ...]

    def __contains__(self, g: FinAbGroup) -> bool:
        return g in self.candidates


def _torsion_order(g: FinAbGroup) -> int:
    return reduce(lambda a, b: a * b, g.torsion, 1)


def enumerate_middle_groups(
    a: FinAbGroup, c: FinAbGroup, bound: int = DEFAULT_BOUND
) -> ExtensionCandidateSet:
    """All middle groups of 0 -> A -> G -> C -> 0 under the rank/order
    contract (free rank adds, torsion order multiplies)."""
    t = _torsion_order(a) * _torsion_order(c)
    if t > bound:
        raise EnumerationBoundError(
            f"torsion order {t} exceeds enumeration bound {bound}"
        )
    free = a.free_rank + c.free_rank
    primes = sorted(
        set(a.primary_decomposition()) | set(c.primary_decomposition())
    )
    per_prime: list[list[list[int]]] = []  # for each prime, list of factor-lists
    for p in primes:
        mu = a.exponents_at(p)
        nu = c.exponents_at(p)
        total = sum(mu) + sum(nu)
        shapes = [
            lam for lam in partitions(total) if lr_positive(lam, mu, nu)
        ]
        per_prime.append([[p**e for e in lam] for lam in shapes])

    results: set[FinAbGroup] = set()

    def combine(i: int, acc: list[int]):
        if i == len(per_prime):
            results.add(FinAbGroup.from_factors([0] * free + acc))
            return
        for factors in per_prime[i]:
            combine(i + 1, acc + factors)

    combine(0, [])
    ordered = tuple(
        sorted(results, key=lambda g: (g.free_rank, len(g.torsion), g.torsion))
    )
    return ExtensionCandidateSet(a, c, ordered)


# ---------------------------------------------------------------------------
# Evidence-driven resolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Retraction:
    """The quotient map admits a section, so the sequence splits.

    ``sections`` maps quotient generator names to the names of their chosen
    lifts in the middle group.
    """

    sections: tuple[tuple[str, str], ...] = ()
    cite: str = ""


@dataclass(frozen=True)
class ElementOrderLift:
    """A named lift of a quotient generator with known order.

    ``order`` is None for an infinite-order lift.  If the order exceeds the
    order of the quotient generator, ``absorbs`` names the sub-side factor
    the lift cyclically extends.
    """

    lift_name: str
    order: int | None
    maps_to: str
    absorbs: str | None = None
    remainder_name: str | None = None
    cite: str = ""


@dataclass(frozen=True)
class RelationFact:
    """A composition relation m * lift = s * rhs determining a lift's order.

    ``lift_name`` lifts the quotient generator ``lift_of`` (m must equal that
    generator's order); ``rhs`` names a sub-side generator, ``rhs_mult`` its
    coefficient (odd unknowns normalized to their odd part).
    """

    lift_name: str
    lift_of: str
    multiplier: int
    rhs: str
    rhs_mult: int = 1
    remainder_name: str | None = None
    cite: str = ""


@dataclass(frozen=True)
class ExternalFact:
    """An external theorem pinning the middle group outright."""

    factors: tuple[tuple[int, str], ...]  # (order, generator name); 0 = Z
    statement: str = ""
    cite: str = ""


@dataclass(frozen=True)
class EhpInjectivity:
    """Resolve by transporting the resolution of another row (n_source, k);
    translated into that row's concrete evidence before reaching the solver.
    ``names`` maps source-row lift names to their local counterparts."""

    source_n: int
    names: tuple[tuple[str, str], ...] = ()
    cite: str = ""


@dataclass(frozen=True)
class ExtensionProblem:
    """A concrete extension problem with named generators.

    ``sub`` and ``quot`` list (order, generator-name) pairs, order 0 meaning
    an infinite cyclic factor.
    """

    sub: tuple[tuple[int, str], ...]
    quot: tuple[tuple[int, str], ...]
    context: str = ""

    def sub_group(self) -> FinAbGroup:
        return FinAbGroup.from_factors([o for o, _ in self.sub])

    def quot_group(self) -> FinAbGroup:
        return FinAbGroup.from_factors([o for o, _ in self.quot])


@dataclass(frozen=True)
class ResolvedExtension:
    group: FinAbGroup
    generators: tuple[tuple[int, str], ...]
    evidence_used: tuple = ()

    def generator_names(self) -> tuple[str, ...]:
        return tuple(name for _, name in self.generators)


def _find_for(evidence, cls, pred):
    return [e for e in evidence if isinstance(e, cls) and pred(e)]


def apply_evidence(
    problem: ExtensionProblem, evidence, bound: int = DEFAULT_BOUND
) -> ResolvedExtension:
    """Resolve an extension problem to a unique middle group.

    Raises :class:`UnresolvedExtensionError` if the evidence leaves more than
    one candidate, and :class:`ExtensionError` on inconsistent evidence (a
    claimed middle group outside the candidate set).
    """
    evidence = list(evidence)
    a_group = problem.sub_group()
    c_group = problem.quot_group()
    candidates = enumerate_middle_groups(a_group, c_group, bound)

    external = [e for e in evidence if isinstance(e, ExternalFact)]
    if external:
        factors = list(external[0].factors)
        return _finish(problem, candidates, factors, evidence)

    retractions = [e for e in evidence if isinstance(e, Retraction)]
    if retractions:
        sections = dict(retractions[0].sections)
        factors = list(problem.sub)
        for order, name in problem.quot:
            factors.append((order, sections.get(name, f"ext({name})")))
        return _finish(problem, candidates, factors, evidence)

    factors = list(problem.sub)
    unresolved: list[str] = []
    for order, name in problem.quot:
        if order == 0:
            lifts = _find_for(
                evidence, ElementOrderLift, lambda e: e.maps_to == name
            )
            lift_name = lifts[0].lift_name if lifts else f"ext({name})"
            factors.append((0, lift_name))
            continue
        rels = _find_for(evidence, RelationFact, lambda e: e.lift_of == name)
        lifts = _find_for(
            evidence, ElementOrderLift, lambda e: e.maps_to == name
        )
        if rels:
            r = rels[0]
            if r.multiplier != order:
                raise ExtensionError(
                    f"{problem.context}: relation multiplier {r.multiplier} != "
                    f"order {order} of quotient generator {name}"
                )
            idx = _factor_index(factors, r.rhs, problem.context)
            o_a = factors[idx][0]
            rhs_order = o_a // gcd(o_a, r.rhs_mult)
            lift_order = r.multiplier * rhs_order
            leftover = o_a * order // lift_order
            del factors[idx]
            factors.insert(idx, (lift_order, r.lift_name))
            if leftover > 1:
                rem = r.remainder_name or f"{leftover}-part({r.rhs})"
                factors.insert(idx + 1, (leftover, rem))
        elif lifts:
            e = lifts[0]
            if e.order == order:
                factors.append((order, e.lift_name))
            elif e.order is not None and e.order > order and e.absorbs:
                idx = _factor_index(factors, e.absorbs, problem.context)
                o_a = factors[idx][0]
                leftover = o_a * order // e.order
                del factors[idx]
                factors.insert(idx, (e.order, e.lift_name))
                if leftover > 1:
                    rem = e.remainder_name or f"{leftover}-part({e.absorbs})"
                    factors.insert(idx + 1, (leftover, rem))
            else:
                raise ExtensionError(
                    f"{problem.context}: lift {e.lift_name} has order {e.order} "
                    f"incompatible with quotient generator {name} of order {order}"
                )
        else:
            # no evidence: split automatically only when Ext forces it
            remaining = [o for o, _ in factors if o > 1]
            if all(gcd(order, o) == 1 for o in remaining):
                factors.append((order, f"ext({name})"))
            else:
                unresolved.append(name)
    if unresolved:
        raise UnresolvedExtensionError(
            problem.context,
            candidates.candidates,
            "no evidence for quotient generator(s) " + ", ".join(unresolved),
        )
    return _finish(problem, candidates, factors, evidence)


def _factor_index(factors, name: str, context: str) -> int:
    for i, (_, n) in enumerate(factors):
        if n == name:
            return i
    raise ExtensionError(f"{context}: evidence references unknown generator {name!r}")


def _finish(problem, candidates, factors, evidence) -> ResolvedExtension:
    group = FinAbGroup.from_factors([o for o, _ in factors])
    if group not in candidates:
        raise ExtensionError(
            f"{problem.context}: resolved group {group} is not among the "
            f"enumerated candidates"
        )
    return ResolvedExtension(group, tuple(factors), tuple(evidence))
