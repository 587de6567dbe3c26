"""Class-preserving graph automorphisms via refinement + backtracking.

Colour refinement is the 1-dimensional Weisfeiler-Leman pass vectorised with
numpy; the search individualises one vertex per level against every vertex
of the matching cell, so leaves of the tree are exactly the automorphisms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .graphs import Graph


@dataclass
class AutomorphismGroup:
    elements: list[tuple[int, ...]]  # every permutation, identity first
    generators: list[tuple[int, ...]]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


class _Refiner:
    def __init__(self, g: Graph, base_colors: Sequence[int]):
        self.n = g.n
        maxdeg = max((g.degree(v) for v in range(g.n)), default=0)
        pad = np.full((g.n, maxdeg), -1, dtype=np.int64)
        for v in range(g.n):
            pad[v, : g.degree(v)] = g.adj[v]
        self.pad = pad
        self.base = np.asarray(base_colors, dtype=np.int64)
        self.edge_set = {u * g.n + v for u in range(g.n) for v in g.adj[u]}
        self.adj = g.adj

    def refine(self, colors: np.ndarray) -> np.ndarray:
        """Iterate WL colour refinement to a fixpoint."""
        colors = np.asarray(colors, dtype=np.int64)
        _, colors = np.unique(colors, return_inverse=True)
        ncolors = int(colors.max()) + 1
        while True:
            gathered = np.where(self.pad >= 0, colors[self.pad], -1)
            gathered.sort(axis=1)
            # fold the signature columns into one id, re-compressing as we go
            h = colors.copy()
            mult = ncolors + 2
            width = ncolors
            for col in range(gathered.shape[1]):
                h = h * mult + (gathered[:, col] + 1)
                uniq, h = np.unique(h, return_inverse=True)
                width = len(uniq)
            if width == ncolors:
                return h.astype(np.int64)
            colors = h.astype(np.int64)
            ncolors = width

    def joint_signature(self, colors: np.ndarray) -> bytes:
        return np.sort(colors).tobytes()

    def is_automorphism(self, perm: np.ndarray) -> bool:
        n = self.n
        es = self.edge_set
        for u in range(n):
            pu = perm[u] * n
            for v in self.adj[u]:
                if pu + perm[v] not in es:
                    return False
        return True


def automorphism_group(g: Graph, max_elements: int = 100_000) -> AutomorphismGroup:
    """All class-preserving automorphisms of g."""
    n = g.n
    if n == 0:
        return AutomorphismGroup([()], [])
    base = np.array([g.vertex_class[v] * (n + 1) + g.degree(v) for v in range(n)], dtype=np.int64)
    ref = _Refiner(g, base)
    found: list[tuple[int, ...]] = []

    def search(dom: np.ndarray, img: np.ndarray) -> None:
        # dom arrives refined; refine the image side and compare invariants
        if len(found) >= max_elements:
            return
        img = ref.refine(img)
        if ref.joint_signature(dom) != ref.joint_signature(img):
            return
        counts = np.bincount(dom)
        split = [c for c in np.unique(dom) if counts[c] > 1]
        if not split:
            perm = np.empty(n, dtype=np.int64)
            order_d = np.argsort(dom, kind="stable")
            order_i = np.argsort(img, kind="stable")
            perm[order_d] = order_i
            if ref.is_automorphism(perm):
                found.append(tuple(int(x) for x in perm))
            return
        c = split[0]
        dcell = np.flatnonzero(dom == c)
        icell = np.flatnonzero(img == c)
        v = int(dcell[0])
        fresh = int(dom.max()) + 1
        d2 = dom.copy()
        d2[v] = fresh
        d2 = ref.refine(d2)
        for u in icell:
            i2 = img.copy()
            i2[int(u)] = fresh
            search(d2, i2)

    search(ref.refine(base.copy()), base.copy())
    identity = tuple(range(n))
    elements = [identity] + [p for p in found if p != identity]
    gens = _minimal_generators(elements)
    return AutomorphismGroup(elements, gens)


def _minimal_generators(elements: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    if len(elements) <= 1:
        return []
    target = set(elements)
    gens: list[tuple[int, ...]] = []
    closure = {elements[0]}
    for p in elements[1:]:
        if p in closure:
            continue
        gens.append(p)
        closure = _close(closure | {p})
        if closure == target:
            break
    return gens


def _close(seed: set[tuple[int, ...]]) -> set[tuple[int, ...]]:
    out = set(seed)
    frontier = list(seed)
    while frontier:
        nxt = []
        for a in frontier:
            for b in seed:
                c = tuple(a[i] for i in b)
                if c not in out:
                    out.add(c)
                    nxt.append(c)
        frontier = nxt
    return out


def apply_perm(perm: Sequence[int], v: int) -> int:
    return perm[v]


def invert(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)


def compose(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Permutation a∘b: first apply b, then a."""
    return tuple(a[b[i]] for i in range(len(b)))


def canonicalize_configuration(
    g: Graph, aut: AutomorphismGroup, pivot: int, marker: int
) -> tuple[tuple[int, ...], tuple[int, int]]:
    """Map (pivot, marker) to the lexicographically least pair in its orbit.

    Returns (automorphism sigma, canonical pair) with
    sigma(pivot), sigma(marker) == canonical pair.
    """
    from .graphs import KEY

    if g.vertex_class[pivot] != KEY:
        raise ValueError("pivot must be a key vertex")
    if marker not in g.adj[pivot]:
        raise ValueError("marker must be adjacent to pivot")
    best = None
    best_perm = None
    for perm in aut.elements:
        pair = (perm[pivot], perm[marker])
        if best is None or pair < best:
            best = pair
            best_perm = perm
    return best_perm, best


def orbit_of_pair(aut: AutomorphismGroup, pair: tuple[int, int]) -> set[tuple[int, int]]:
    return {(p[pair[0]], p[pair[1]]) for p in aut.elements}
