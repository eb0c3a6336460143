"""Independent oracle for extension-middle-group enumeration.

A finite abelian group G contains a subgroup isomorphic to A with quotient
isomorphic to C exactly when, at every prime p, the p-part of G contains a
subgroup of the right type with the right quotient type.  This oracle decides
that by brute force: subgroups of Z^g / diag(p^lam) correspond one-to-one to
Hermite-normal-form bases of the full-rank sublattices of Z^g lying over
diag(p^lam), which are enumerated outright.  Since subgroup types are
invariant under conjugating all three partitions, each query is first
conjugated to whichever orientation has fewer generators, keeping g small.
"""

from functools import lru_cache, reduce
from itertools import product

from cohomotopy.abelian import IntMatrix, group_from_presentation
from cohomotopy.extensions import conjugate_partition


def _divisor_exponents(e):
    return range(e + 1)


def _solve_rows_over(h_rows, lam, p):
    """Coordinates of diag(p^lam) in the basis ``h_rows`` (upper triangular),
    or None when the diagonal lattice is not contained in it."""
    g = len(lam)
    coords = []
    for i in range(g):
        v = [p ** lam[i] if j == i else 0 for j in range(g)]
        x = [0] * g
        for j in range(g):
            rem = v[j] - sum(x[l] * h_rows[l][j] for l in range(j))
            if rem % h_rows[j][j] != 0:
                return None
            x[j] = rem // h_rows[j][j]
        coords.append(x)
    return coords


def _type_of(rows, p):
    g = group_from_presentation(IntMatrix.from_rows(rows))
    return g.exponents_at(p)


@lru_cache(maxsize=None)
def subgroup_quotient_types(p, lam):
    """All (subgroup type, quotient type) pairs realized inside the abelian
    p-group of type ``lam`` (a descending partition)."""
    lam = tuple(lam)
    if not lam:
        return frozenset({((), ())})
    g = len(lam)
    out = set()
    diag_choices = [[p ** a for a in _divisor_exponents(e)] for e in lam]
    for diag in product(*diag_choices):
        # upper-triangular HNF rows: row i has diag[i] at i, free entries right
        free = [(i, j) for i in range(g) for j in range(i + 1, g)]
        for combo in product(*[range(diag[j]) for _, j in free]):
            rows = [[diag[i] if j == i else 0 for j in range(g)] for i in range(g)]
            for (i, j), v in zip(free, combo):
                rows[i][j] = v
            coords = _solve_rows_over(rows, lam, p)
            if coords is None:
                continue
            out.add((_type_of(coords, p), _type_of(rows, p)))
    return frozenset(out)


@lru_cache(maxsize=None)
def realizable(p, lam, mu, nu):
    """Whether the p-group of type ``lam`` has a subgroup of type ``mu`` with
    quotient of type ``nu`` (conjugating first to minimize the rank)."""
    lam, mu, nu = tuple(lam), tuple(mu), tuple(nu)
    if sum(lam) != sum(mu) + sum(nu):
        return False
    if lam and len(lam) > lam[0]:
        lam, mu, nu = (
            conjugate_partition(lam),
            conjugate_partition(mu),
            conjugate_partition(nu),
        )
    return (mu, nu) in subgroup_quotient_types(p, lam)


def oracle_middle_groups(a, c):
    """All middle groups of 0 -> A -> G -> C -> 0 for finite A, C, as a set
    of FinAbGroup values, by exhaustive subgroup search."""
    from cohomotopy.abelian import FinAbGroup
    from cohomotopy.extensions import partitions

    assert a.is_finite() and c.is_finite()
    primes = sorted(set(a.primary_decomposition()) | set(c.primary_decomposition()))
    per_prime = []
    for p in primes:
        mu = a.exponents_at(p)
        nu = c.exponents_at(p)
        shapes = [
            lam
            for lam in partitions(sum(mu) + sum(nu))
            if realizable(p, lam, mu, nu)
        ]
        per_prime.append([[p ** e for e in lam] for lam in shapes])
    results = set()
    for combo in product(*per_prime) if per_prime else [()]:
        factors = reduce(lambda acc, fs: acc + fs, combo, [])
        results.add(FinAbGroup.from_factors(factors))
    return results
