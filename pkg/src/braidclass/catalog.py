"""Named groups and ingestion of user-supplied groups.

Catalog names: ``Zn`` (cyclic), ``Dn`` (dihedral of order n), ``Qn``
(dicyclic of order n, quaternion for powers of two), ``Sn``, ``An`` and
direct products written with ``x`` such as ``Z2xZ4``.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import NotAGroup, ParseError
from .groups import FiniteGroup, direct_product


def _perm_mul(p, q):
    # apply p then q
    return tuple(q[i] for i in p)


def from_permutations(gens: Sequence[Sequence[int]], label: str = "") -> FiniteGroup:
    """Closure of permutation generators (0-based image lists).  Composition
    applies the left factor first, so the product of p and q sends i to q[p[i]]."""
    if not gens:
        return FiniteGroup([[0]], label or "Z1", [()])
    degree = len(gens[0])
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise ParseError(f"not a permutation of 0..{degree - 1}: {list(g)}")
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    gens = [tuple(g) for g in gens]
    i = 0
    while i < len(elems):
        for g in gens:
            h = _perm_mul(elems[i], g)
            if h not in index:
                index[h] = len(elems)
                elems.append(h)
        i += 1
    # canonical element order: identity first, then lexicographic
    elems = [ident] + sorted(e for e in elems if e != ident)
    index = {e: k for k, e in enumerate(elems)}
    table = [[index[_perm_mul(a, b)] for b in elems] for a in elems]
    return FiniteGroup(table, label or f"Perm{len(elems)}", elems)


def cyclic(n: int) -> FiniteGroup:
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, f"Z{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order n (n even, n >= 4): symmetries of an n/2-gon,
    element r^i s^j encoded as i + (n/2)*j."""
    if n < 4 or n % 2:
        raise ParseError(f"dihedral order must be even and >= 4, got {n}")
    m = n // 2
    table = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        i, j = x % m, x // m
        for y in range(n):
            k, l = y % m, y // m
            # r^i s^j r^k s^l = r^(i + (-1)^j k) s^(j+l)
            table[x, y] = (i + (k if j == 0 else -k)) % m + m * ((j + l) % 2)
    return FiniteGroup(table, f"D{n}")


def dicyclic(n: int) -> FiniteGroup:
    """Dicyclic group of order n (n divisible by 4): <a, x | a^(2m) = 1,
    x^2 = a^m, x a x^-1 = a^-1> with m = n/4; element a^i x^j is i + 2m*j."""
    if n < 4 or n % 4:
        raise ParseError(f"dicyclic order must be divisible by 4, got {n}")
    m2 = n // 2
    m = m2 // 2
    table = np.empty((n, n), dtype=np.int64)
    for p in range(n):
        i, j = p % m2, p // m2
        for q in range(n):
            k, l = q % m2, q // m2
            if j == 0:
                e, f = i + k, l
            elif l == 0:
                e, f = i - k, 1
            else:
                e, f = i - k + m, 0
            table[p, q] = e % m2 + m2 * f
    return FiniteGroup(table, f"Q{n}")


def symmetric(n: int) -> FiniteGroup:
    if n <= 1:
        return FiniteGroup([[0]], f"S{n}", [()])
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return from_permutations(gens, f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n <= 2:
        return FiniteGroup([[0]], f"A{n}", [tuple(range(max(n, 0)))])
    gens = []
    for k in range(2, n):
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0  # 3-cycle (0 1 k)
        gens.append(tuple(p))
    return from_permutations(gens, f"A{n}")


_FACTOR = re.compile(r"^([ZDQSA])(\d+)$")
_BUILDERS: dict[str, Callable[[int], FiniteGroup]] = {
    "Z": cyclic, "D": dihedral, "Q": dicyclic, "S": symmetric, "A": alternating,
}
_memo: dict[str, FiniteGroup] = {}


def group_by_name(name: str) -> FiniteGroup:
    name = name.strip()
    if name in _memo:
        return _memo[name]
    factors = name.split("x")
    groups = []
    for f in factors:
        m = _FACTOR.match(f)
        if not m:
            raise ParseError(f"unknown group name {f!r}")
        kind, k = m.group(1), int(m.group(2))
        if kind == "Z" and k < 1:
            raise ParseError("cyclic order must be positive")
        groups.append(_BUILDERS[kind](k))
    G = groups[0]
    for H in groups[1:]:
        G = direct_product(G, H)
    G.label = name
    _memo[name] = G
    return G


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    description: str

    def build(self) -> FiniteGroup:
        return group_by_name(self.name)


CATALOG: tuple[CatalogEntry, ...] = tuple(CatalogEntry(n, d) for n, d in [
    ("Z1", "trivial group"),
    ("Z2", "cyclic"), ("Z3", "cyclic"), ("Z4", "cyclic"), ("Z5", "cyclic"),
    ("Z6", "cyclic"), ("Z7", "cyclic"), ("Z8", "cyclic"), ("Z9", "cyclic"),
    ("Z10", "cyclic"), ("Z12", "cyclic"),
    ("Z2xZ2", "Klein four-group"), ("Z2xZ4", "abelian"),
    ("Z2xZ2xZ2", "elementary abelian"), ("Z3xZ3", "elementary abelian"),
    ("Z2xZ6", "abelian"),
    ("S3", "symmetric"), ("D8", "dihedral of order 8"), ("Q8", "quaternion"),
    ("D10", "dihedral of order 10"), ("D12", "dihedral of order 12"),
    ("Q12", "dicyclic of order 12"), ("A4", "alternating"),
    ("Z2xS3", "direct product"), ("D16", "dihedral of order 16"),
    ("Q16", "generalized quaternion"), ("S4", "symmetric"),
    ("Z2xA4", "direct product"), ("A5", "alternating"),
])


def catalog_groups(max_order: int | None = None) -> list[FiniteGroup]:
    out = [e.build() for e in CATALOG]
    if max_order is not None:
        out = [G for G in out if G.order <= max_order]
    return out


# -- file ingestion ----------------------------------------------------------

def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Parse 1-based cycle notation such as ``(1 2 3)(4 5)`` or ``(1,2)``."""
    perm = list(range(degree))
    text = text.strip()
    if not text or text == "()":
        return tuple(perm)
    if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\))+", text):
        raise ParseError(f"bad cycle notation {text!r}")
    for cyc in re.findall(r"\(([^)]*)\)", text):
        pts = [int(p) - 1 for p in re.split(r"[\s,]+", cyc.strip())]
        if any(not 0 <= p < degree for p in pts) or len(set(pts)) != len(pts):
            raise ParseError(f"bad cycle {cyc!r} for degree {degree}")
        # apply in sequence: left cycle first
        img = {p: pts[(k + 1) % len(pts)] for k, p in enumerate(pts)}
        perm = [img.get(v, v) for v in perm]
    return tuple(perm)


def _normalize_images(gens) -> list[tuple[int, ...]]:
    gens = [list(map(int, g)) for g in gens]
    if not gens:
        return []
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise ParseError("generators have different degrees")
    if all(sorted(g) == list(range(n)) for g in gens):
        return [tuple(g) for g in gens]
    if all(sorted(g) == list(range(1, n + 1)) for g in gens):
        return [tuple(v - 1 for v in g) for g in gens]
    raise ParseError("generators are not permutations of 0..n-1 or 1..n")


def parse_group_data(data, label: str = "") -> FiniteGroup:
    if isinstance(data, dict):
        if "table" in data:
            return FiniteGroup.from_table(data["table"], label or data.get("label", ""))
        if "generators" in data:
            gens = data["generators"]
            if gens and isinstance(gens[0], str):
                degree = int(data.get("degree", 0))
                if degree <= 0:
                    raise ParseError("cycle-notation generators need a degree")
                gens = [parse_cycles(g, degree) for g in gens]
            return from_permutations(_normalize_images(gens),
                                     label or data.get("label", ""))
        raise ParseError("group object needs 'table' or 'generators'")
    if isinstance(data, list):
        return FiniteGroup.from_table(data, label)
    raise ParseError("unrecognised group data")


def parse_group(source: str) -> FiniteGroup:
    """A catalog name, or a path to a JSON file holding ``{"table": ...}``
    or ``{"generators": ...}``, or a whitespace-separated table file."""
    path = Path(source)
    if not path.is_file():
        return group_by_name(source)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        try:
            data = [[int(v) for v in line.split()]
                    for line in text.splitlines() if line.strip()]
        except ValueError as exc:
            raise ParseError(f"{source}: neither JSON nor an integer grid") from exc
    try:
        return parse_group_data(data, path.stem)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (ParseError, NotAGroup)):
            raise
        raise ParseError(f"{source}: {exc}") from exc


def group_to_table_json(G: FiniteGroup) -> str:
    return json.dumps({"label": G.label, "table": G.mul.tolist()})
