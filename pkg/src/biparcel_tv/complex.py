"""Closed oriented stratified 3-dimensional simplicial complexes.

Vertices carry the dimension of their stratum (0-3). A simplex lies in the
stratum of its highest-dimensional vertex unless ``simplex_strata`` says
otherwise; overrides exist so that non-flag-like input can be represented and
rejected.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

from .errors import (
    DeltaInconsistent,
    InvalidArgument,
    InvalidStratification,
    NotDirectable,
)
from .gaunt import FiniteCategory
from .report import Report

Simplex = tuple[int, ...]
EXIT_DIMENSION = "exit-dimension"


def perm_parity(seq: Sequence[int]) -> int:
    """+1 for an even permutation of sorted(seq), -1 for odd."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def faces(s: Simplex) -> Iterable[Simplex]:
    for k in range(1, len(s) + 1):
        yield from itertools.combinations(s, k)


def induced_face_orientation(tet: Simplex, sign: int, face: Simplex) -> int:
    """Orientation induced on ``face`` (relative to its sorted order)."""
    (i,) = [p for p, v in enumerate(tet) if v not in face]
    rest = [v for v in tet if v != tet[i]]
    return sign * (-1) ** i * perm_parity(rest)


@dataclass(frozen=True)
class StratifiedComplex:
    vertices: Mapping[int, int]
    tets: tuple[tuple[Simplex, int], ...]
    simplex_strata: Mapping[Simplex, int] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        vertices: Mapping[int, int],
        tets: Iterable[tuple[Sequence[int], int]],
        simplex_strata: Mapping[Sequence[int], int] | None = None,
    ) -> "StratifiedComplex":
        verts = {int(v): int(d) for v, d in sorted(vertices.items())}
        tt = []
        for v, s in tets:
            v = tuple(int(x) for x in v)
            if len(v) != 4 or len(set(v)) != 4 or s not in (1, -1):
                raise InvalidArgument(f"bad tetrahedron {v} sign {s}")
            if any(x not in verts for x in v):
                raise InvalidArgument(f"tetrahedron {v} uses an unknown vertex")
            tt.append((v, int(s)))
        for d in verts.values():
            if d not in (0, 1, 2, 3):
                raise InvalidArgument(f"stratum dimension {d} out of range")
        over = {tuple(sorted(int(x) for x in k)): int(d) for k, d in (simplex_strata or {}).items()}
        return cls(verts, tuple(sorted(tt)), dict(sorted(over.items())))

    # derived structure

    @cached_property
    def simplices(self) -> dict[int, list[Simplex]]:
        out: dict[int, set[Simplex]] = defaultdict(set)
        for v in self.vertices:
            out[0].add((v,))
        for t, _ in self.tets:
            for f in faces(tuple(sorted(t))):
                out[len(f) - 1].add(f)
        return {k: sorted(out[k]) for k in range(4)}

    @property
    def edges(self) -> list[Simplex]:
        return self.simplices[1]

    @property
    def triangles(self) -> list[Simplex]:
        return self.simplices[2]

    @cached_property
    def tets_of(self) -> dict[Simplex, list[int]]:
        """Map each simplex to the indices of tetrahedra containing it."""
        out: dict[Simplex, list[int]] = defaultdict(list)
        for idx, (t, _) in enumerate(self.tets):
            for f in faces(tuple(sorted(t))):
                out[f].append(idx)
        return dict(out)

    def tet_set(self) -> set[Simplex]:
        return {tuple(sorted(t)) for t, _ in self.tets}

    def stratum(self, s: Sequence[int]) -> int:
        s = tuple(sorted(s))
        if s in self.simplex_strata:
            return self.simplex_strata[s]
        return max(self.vertices[v] for v in s)

    def strata_present(self) -> list[int]:
        return sorted(set(self.vertices.values()))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(self.simplices[k]) for k in range(4))

    def components(self) -> int:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            parent[find(a)] = find(b)
        return len({find(v) for v in self.vertices})

    def structure_problems(self) -> Report:
        rep = Report()
        rep.record(
            "closed-pseudomanifold",
            [f for f in self.triangles if len(self.tets_of[f]) != 2],
        )
        dup = [t for t, n in _counts(tuple(sorted(t)) for t, _ in self.tets).items() if n > 1]
        rep.record("distinct-tets", dup)
        bad = []
        for f in self.triangles:
            ids = self.tets_of[f]
            if len(ids) != 2:
                continue
            o = [induced_face_orientation(*self.tets[i], f) for i in ids]
            if o[0] == o[1]:
                bad.append(f)
        rep.record("orientation-consistency", bad)
        rep.record("isolated-vertices", [v for v in self.vertices if (v,) not in self.tets_of])
        return rep

    def relabeled(self, mapping: Mapping[int, int]) -> "StratifiedComplex":
        return StratifiedComplex.build(
            {mapping[v]: d for v, d in self.vertices.items()},
            [(tuple(mapping[x] for x in t), s) for t, s in self.tets],
            {tuple(mapping[x] for x in k): d for k, d in self.simplex_strata.items()},
        )

    def to_json(self) -> dict:
        d: dict[str, Any] = {
            "vertices": [{"id": v, "stratum": s} for v, s in self.vertices.items()],
            "tets": [{"v": list(t), "sign": s} for t, s in self.tets],
        }
        if self.simplex_strata:
            d["simplex_strata"] = [{"v": list(k), "stratum": s} for k, s in self.simplex_strata.items()]
        return d

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> "StratifiedComplex":
        try:
            return cls.build(
                {int(v["id"]): int(v["stratum"]) for v in d["vertices"]},
                [(t["v"], int(t.get("sign", 1))) for t in d["tets"]],
                {tuple(s["v"]): int(s["stratum"]) for s in d.get("simplex_strata", [])},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgument(f"malformed triangulation: {exc}") from exc


def _counts(items: Iterable) -> dict:
    out: dict = defaultdict(int)
    for x in items:
        out[x] += 1
    return out


def validate_flaglike(c: StratifiedComplex) -> Report:
    """Per-simplex flag check.

    For every simplex and every k, the vertices lying in strata of dimension
    <= k must span a face that itself lies in those strata and has dimension
    at most k. Every simplex of the complex is checked.
    """
    bad_flag, bad_dim = [], []
    for k in range(4):
        for s in c.simplices[k]:
            for level in range(3):
                low = tuple(v for v in s if c.vertices[v] <= level)
                if not low:
                    continue
                if c.stratum(low) > level:
                    bad_flag.append(s)
                    break
                if len(low) - 1 > level:
                    bad_dim.append(s)
                    break
    closure = []
    for k in range(1, 4):
        for s in c.simplices[k]:
            if any(c.stratum(f) > c.stratum(s) for f in faces(s) if f != s):
                closure.append(s)
    rep = Report()
    rep.record("flag", sorted(set(bad_flag)), "strata meet each simplex in a flag of faces")
    rep.record("stratum-dimension", sorted(set(bad_dim)))
    rep.record("strata-subcomplexes", closure)
    return rep


def barycentric_subdivide(c: StratifiedComplex) -> StratifiedComplex:
    """First barycentric subdivision; each barycenter takes its simplex's stratum."""
    if not validate_flaglike(c)["strata-subcomplexes"].passed:
        raise InvalidStratification("strata closures are not subcomplexes")
    all_s = [s for k in range(4) for s in c.simplices[k]]
    bid = {s: i for i, s in enumerate(all_s)}
    verts = {bid[s]: c.stratum(s) for s in all_s}
    tets = []
    for t, sign in c.tets:
        for perm in itertools.permutations(range(4)):
            chain = [tuple(sorted(t[p] for p in perm[: i + 1])) for i in range(4)]
            tets.append((tuple(bid[s] for s in chain), sign * perm_parity(perm)))
    return StratifiedComplex.build(verts, tets)


def disjoint_union(a: StratifiedComplex, b: StratifiedComplex) -> StratifiedComplex:
    off = max(a.vertices) + 1 - min(b.vertices)
    shifted = b.relabeled({v: v + off for v in b.vertices})
    return StratifiedComplex.build(
        {**a.vertices, **shifted.vertices},
        list(a.tets) + list(shifted.tets),
        {**a.simplex_strata, **shifted.simplex_strata},
    )


# generators


def boundary_4_simplex() -> StratifiedComplex:
    tets = []
    for i in range(5):
        tets.append((tuple(v for v in range(5) if v != i), (-1) ** i))
    return StratifiedComplex.build({v: 3 for v in range(5)}, tets)


def _join_of_cycles(strata: Mapping[int, int]) -> StratifiedComplex:
    a_edges = [(0, 1), (1, 2), (2, 0)]
    b_edges = [(3, 4), (4, 5), (5, 3)]
    tets = [((a0, a1, b0, b1), 1) for a0, a1 in a_edges for b0, b1 in b_edges]
    return StratifiedComplex.build(strata, tets)


def sphere_join_unknot() -> StratifiedComplex:
    """S^3 as the join of two triangles; the cycle 0-1-2 is the knot."""
    return _join_of_cycles({0: 1, 1: 1, 2: 1, 3: 3, 4: 3, 5: 3})


def sphere_join_unknot_disk() -> StratifiedComplex:
    """As :func:`sphere_join_unknot` with the cone from vertex 3 on the knot as a spanning disk."""
    return _join_of_cycles({0: 1, 1: 1, 2: 1, 3: 2, 4: 3, 5: 3})


GENERATORS = {
    "boundary_4_simplex": boundary_4_simplex,
    "sphere_join_unknot": sphere_join_unknot,
    "sphere_join_unknot_disk": sphere_join_unknot_disk,
}


# directed triangulations


def strata_chain(dims: Sequence[int]) -> FiniteCategory:
    """Poset chain whose objects are named by the given stratum dimensions."""
    names = [str(d) for d in sorted(set(dims))]
    arrows, table = {}, {}

    def arrow(a: str, b: str) -> str:
        return f"id_{a}" if a == b else f"{a}->{b}"

    for i, a in enumerate(names):
        for b in names[i:]:
            arrows[arrow(a, b)] = (a, b)
    for i, a in enumerate(names):
        for j in range(i, len(names)):
            for k in range(j, len(names)):
                b, c = names[j], names[k]
                table[(arrow(a, b), arrow(b, c))] = arrow(a, c)
    return FiniteCategory(tuple(names), arrows, {a: arrow(a, a) for a in names}, table)


@dataclass(frozen=True)
class DirectedTriangulation:
    complex: StratifiedComplex
    order: Mapping[int, tuple[int, ...]]
    edge_dir: Mapping[Simplex, tuple[int, int]]
    gamma: FiniteCategory
    delta: Mapping[Simplex, str]
    mode: str = EXIT_DIMENSION

    @cached_property
    def position(self) -> dict[int, tuple[int, int]]:
        return {v: (d, i) for d, vs in self.order.items() for i, v in enumerate(vs)}

    def sort_vertices(self, s: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(s, key=self.position.__getitem__))

    def vertex_object(self, v: int) -> str:
        return str(self.complex.vertices[v])

    def epsilon(self, tet_index: int) -> int:
        """+1 when the direction-sorted vertex order agrees with the stored orientation."""
        t, sign = self.complex.tets[tet_index]
        ordered = self.sort_vertices(t)
        return sign * perm_parity([t.index(v) for v in ordered])

    def to_json(self) -> dict:
        d = self.complex.to_json()
        d["order"] = {str(k): list(v) for k, v in sorted(self.order.items())}
        return d

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> "DirectedTriangulation":
        c = StratifiedComplex.from_json(d)
        order = d.get("order")
        if order is not None:
            try:
                order = {int(k): [int(x) for x in v] for k, v in order.items()}
            except (TypeError, ValueError, AttributeError) as exc:
                raise InvalidArgument(f"malformed order: {exc}") from exc
        return direct(c, order)


def default_order(c: StratifiedComplex) -> dict[int, list[int]]:
    out: dict[int, list[int]] = defaultdict(list)
    for v, d in sorted(c.vertices.items()):
        out[d].append(v)
    return dict(sorted(out.items()))


def direct(
    c: StratifiedComplex,
    order: Mapping[int, Sequence[int]] | None = None,
    mode: str = EXIT_DIMENSION,
    edge_dir: Mapping[Sequence[int], Sequence[int]] | None = None,
) -> DirectedTriangulation:
    """Orient edges from a per-stratum vertex order.

    Within a stratum edges run from earlier to later vertices; between strata
    they run from the lower-dimensional stratum to the higher one. Explicit
    ``edge_dir`` entries are checked against these rules.
    """
    if mode != EXIT_DIMENSION:
        raise InvalidArgument(f"unsupported stratification mode {mode!r}")
    fl = validate_flaglike(c)
    if not fl.ok:
        raise InvalidStratification(f"triangulation is not flag-like: {fl.failed()}", fl.to_json())
    order = default_order(c) if order is None else {int(k): list(v) for k, v in order.items()}
    by_stratum = default_order(c)
    for d in set(by_stratum) | set(order):
        if sorted(order.get(d, [])) != by_stratum.get(d, []):
            raise InvalidArgument(f"order for stratum {d} is not a permutation of its vertices")
    order = {d: tuple(order[d]) for d in sorted(by_stratum)}
    pos = {v: (d, i) for d, vs in order.items() for i, v in enumerate(vs)}
    dirs: dict[Simplex, tuple[int, int]] = {}
    for e in c.edges:
        u, v = sorted(e, key=pos.__getitem__)
        dirs[e] = (u, v)
    for e, uv in (edge_dir or {}).items():
        e = tuple(sorted(e))
        if e not in dirs:
            raise InvalidArgument(f"edge {e} is not in the complex")
        if tuple(uv) != dirs[e]:
            raise NotDirectable(f"edge direction {tuple(uv)} violates the exit/order rule", tuple(uv))
    for t, _ in c.tets:
        # a linear order on each simplex: in-degrees 0..3 inside the tet
        indeg = sorted(sum(1 for e in itertools.combinations(sorted(t), 2) if dirs[e][1] == v) for v in t)
        if indeg != [0, 1, 2, 3]:
            raise NotDirectable(f"edge directions do not linearly order tet {t}", t)
    gamma = strata_chain(c.strata_present())
    delta: dict[Simplex, str] = {}
    for e, (u, v) in dirs.items():
        a = gamma.hom(str(c.vertices[u]), str(c.vertices[v]))
        if not a:
            raise NotDirectable(f"edge {u}->{v} enters a lower stratum", (u, v))
        delta[e] = a[0]
    for tri in c.triangles:
        u, v, w = sorted(tri, key=pos.__getitem__)
        if gamma.try_compose(delta[_e(u, v)], delta[_e(v, w)]) != delta[_e(u, w)]:
            raise DeltaInconsistent(f"triangle {tri} is not delta-consistent", tri)
    return DirectedTriangulation(c, order, dirs, gamma, delta, mode)


def _e(u: int, v: int) -> Simplex:
    return (u, v) if u < v else (v, u)


def canonical_form(t: DirectedTriangulation | StratifiedComplex) -> tuple:
    """Relabel vertices by (stratum, order position); orient tets by sorted vertices."""
    if isinstance(t, StratifiedComplex):
        t = direct(t)
    c = t.complex
    ranked = sorted(c.vertices, key=t.position.__getitem__)
    new = {v: i for i, v in enumerate(ranked)}
    tets = []
    for tet, s in c.tets:
        img = [new[v] for v in tet]
        tets.append((tuple(sorted(img)), s * perm_parity(img)))
    over = sorted((tuple(sorted(new[v] for v in k)), d) for k, d in c.simplex_strata.items())
    return (tuple(c.vertices[v] for v in ranked), tuple(sorted(tets)), tuple(over))
