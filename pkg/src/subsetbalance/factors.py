"""Catalog of coefficient-set factor pairs for the zero-free sets [+-d].

Each entry factors C = [+-d] as a sumset C1 + C2 = C. Variant 0 is always
the canonical pair {0, 1} + ([-d : d-1] minus {-1, 0}); the remaining
variants for 3 <= d <= 7 are the known alternates, listed together with the
per-element list-to-pair ratio bound (base of the exponential) each pair
achieves on perfectly balanced profiles.
"""

from __future__ import annotations


def canonical_factors(d: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """{0, 1} and {-d..-2, 1..d-1}; valid for every d >= 3."""
    if d < 3:
        raise ValueError(f"zero-free factorization needs d >= 3, got {d}")
    c2 = tuple(range(-d, -1)) + tuple(range(1, d))
    return (0, 1), c2


def _r(lo: int, hi: int) -> tuple[int, ...]:
    return tuple(range(lo, hi + 1))


# d -> list of (C1, C2, ratio_bound); variant order follows the catalog rows.
CATALOG: dict[int, list[tuple[tuple[int, ...], tuple[int, ...], float]]] = {
    3: [
        ((0, 1), (-3, -2, 1, 2), 2.245),
    ],
    4: [
        ((0, 1), (-4, -3, -2, 1, 2, 3), 2.450),
        ((0, 1, 2), (-4, -3, 1, 2), 2.450),
    ],
    5: [
        ((0, 1), _r(-5, -2) + _r(1, 4), 2.640),
        ((0, 1, 2, 3), (-5, -4, 1, 2), 2.640),
        ((0, 1, 2), (-5, -4, -3, 1, 2, 3), 2.582),
    ],
    6: [
        ((0, 1), _r(-6, -2) + _r(1, 5), 2.818),
        ((0, 1, 2, 3, 4), (-6, -5, 1, 2), 2.818),
        ((0, 1, 2), _r(-6, -3) + _r(1, 4), 2.697),
        ((0, 1, 2, 3), (-6, -5, -4, 1, 2, 3), 2.697),
    ],
    7: [
        ((0, 1), _r(-7, -2) + _r(1, 6), 2.987),
        ((0, 1, 2, 3, 4, 5), (-7, -6, 1, 2), 2.987),
        ((0, 1, 2), _r(-7, -3) + _r(1, 5), 2.807),
        ((0, 1, 2, 3, 4), (-7, -6, -5, 1, 2, 3), 2.807),
        ((0, 1, 2, 3), _r(-7, -4) + _r(1, 4), 2.782),
    ],
}


def catalog_entry(d: int, variant: int):
    """(C1, C2, ratio_bound) for a catalog row; canonical rows exist for all
    d >= 3, alternates only for 3 <= d <= 7."""
    if d in CATALOG:
        rows = CATALOG[d]
        if not 0 <= variant < len(rows):
            raise ValueError(f"[+-{d}] has variants 0..{len(rows) - 1}, "
                             f"got {variant}")
        return rows[variant]
    if variant != 0:
        raise ValueError(f"only the canonical variant exists for d = {d}")
    c1, c2 = canonical_factors(d)
    return c1, c2, None
