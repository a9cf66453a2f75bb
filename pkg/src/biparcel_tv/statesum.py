"""State sums over colorings of directed triangulations.

A coloring assigns to every edge a simple 1-arrow over the edge's base arrow
and to every triangle ``uvw`` (direction order) an index into the hom-space
``lambda(uv) lambda(vw) -> lambda(uw)``. The weight of a coloring is

    prod_v c(v)^-1 * prod_e dim(lambda(e)) * prod_tet alpha_eps(lambda(tet))
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, Sequence

from .biparcel import Biparcel, TetKey
from .config import default_tolerance
from .complex import DirectedTriangulation, Simplex
from .errors import DeltaInconsistent, InapplicableSite, Unsupported, WouldBreakDirectability, WouldBreakFlaglikeness
from .gaunt import FiniteCategory, FiniteGroupoid
from .report import Report


@dataclass(frozen=True)
class Amplitude:
    value: complex
    colorings_counted: int = 0
    tolerance: float = 1e-9

    def close(self, other: "Amplitude | complex", tolerance: float | None = None) -> bool:
        tol = self.tolerance if tolerance is None else tolerance
        return abs(self.value - complex(other)) <= tol

    def __complex__(self) -> complex:
        return self.value

    def to_json(self) -> dict:
        return {
            "re": self.value.real,
            "im": self.value.imag,
            "colorings_counted": self.colorings_counted,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class Coloring:
    vertex_color: Mapping[int, str]
    edge_color: Mapping[Simplex, str]
    triangle_color: Mapping[Simplex, int]


def object_map(base: FiniteCategory, strata: Sequence[int]) -> dict[int, str]:
    """Default assignment of base objects to the stratum dimensions present.

    A one-object base absorbs everything; otherwise a base with exactly as
    many objects as strata is matched in order; otherwise objects are looked
    up by the stratum dimension's name.
    """
    strata = sorted(set(strata))
    if len(base.objects) == 1:
        return {d: base.objects[0] for d in strata}
    if len(base.objects) == len(strata):
        return dict(zip(strata, base.objects))
    if all(str(d) in base.objects for d in strata):
        return {d: str(d) for d in strata}
    raise DeltaInconsistent(f"cannot match strata {strata} to base objects {list(base.objects)}")


def resolve_delta(
    b: Biparcel,
    t: DirectedTriangulation,
    objects: Mapping[int, str] | None = None,
) -> tuple[dict[int, str], dict[Simplex, str]]:
    """Push the triangulation's edge classes into the biparcel's base."""
    c = t.complex
    base = b.base
    omap = object_map(base, c.strata_present()) if objects is None else dict(objects)
    vobj = {v: omap[d] for v, d in c.vertices.items()}
    arrows: dict[Simplex, str] = {}
    for e, (u, v) in t.edge_dir.items():
        x, y = vobj[u], vobj[v]
        if x == y:
            arrows[e] = base.identities[x]
            continue
        hom = base.hom(x, y)
        if len(hom) != 1:
            raise DeltaInconsistent(f"edge {u}->{v} has {len(hom)} candidate base arrows {x}->{y}", (u, v))
        arrows[e] = hom[0]
    for tri in c.triangles:
        u, v, w = t.sort_vertices(tri)
        if base.try_compose(arrows[_e(u, v)], arrows[_e(v, w)]) != arrows[_e(u, w)]:
            raise DeltaInconsistent(f"triangle {tri} is not delta-consistent in the base", tri)
    return vobj, arrows


def _e(u: int, v: int) -> Simplex:
    return (u, v) if u < v else (v, u)


class _Plan:
    """Index tables for one (biparcel, triangulation) pair."""

    def __init__(self, b: Biparcel, t: DirectedTriangulation, objects=None):
        c = t.complex
        self.b = b
        self.vobj, arrows = resolve_delta(b, t, objects)
        self.edges = list(c.edges)
        epos = {e: i for i, e in enumerate(self.edges)}
        self.domains = [b.over(arrows[e]) for e in self.edges]
        self.dims = [{s: b.dim(s) for s in dom} for dom in self.domains]
        self.triangles = list(c.triangles)
        self.tri_edges = []
        for tri in self.triangles:
            u, v, w = t.sort_vertices(tri)
            self.tri_edges.append((epos[_e(u, v)], epos[_e(v, w)], epos[_e(u, w)]))
        tpos = {tri: i for i, tri in enumerate(self.triangles)}
        self.tets = []
        for idx, (tet, _) in enumerate(c.tets):
            v0, v1, v2, v3 = t.sort_vertices(tet)
            es = tuple(epos[_e(a, z)] for a, z in ((v0, v1), (v1, v2), (v2, v3), (v0, v3), (v0, v2), (v1, v3)))
            ts = tuple(tpos[tuple(sorted(x))] for x in ((v0, v1, v2), (v1, v2, v3), (v0, v1, v3), (v0, v2, v3)))
            self.tets.append((es, ts, t.epsilon(idx)))
        n = len(self.edges)
        self.tri_at: list[list[int]] = [[] for _ in range(n)]
        for i, te in enumerate(self.tri_edges):
            self.tri_at[max(te)].append(i)
        self.tet_at: list[list[int]] = [[] for _ in range(n)]
        for i, (es, _, _) in enumerate(self.tets):
            self.tet_at[max(es)].append(i)
        vf = 1 + 0j
        for v in c.vertices:
            vf /= b.constants[self.vobj[v]]
        self.vertex_factor = vf


def enumerate_colorings(b: Biparcel, t: DirectedTriangulation, objects=None) -> Iterator[Coloring]:
    """Every admissible coloring once: edges backtracked in id order, then triangles."""
    p = _Plan(b, t, objects)
    n = len(p.edges)
    col: list[str] = [""] * n
    vcol = dict(sorted(p.vobj.items()))

    def rec(i: int) -> Iterator[None]:
        if i == n:
            yield None
            return
        for s in p.domains[i]:
            col[i] = s
            if all(b.N(col[x], col[y], col[z]) > 0 for x, y, z in (p.tri_edges[k] for k in p.tri_at[i])):
                yield from rec(i + 1)

    for _ in rec(0):
        ranges = [range(b.N(col[x], col[y], col[z])) for x, y, z in p.tri_edges]
        edge_color = dict(zip(p.edges, col))
        for idx in itertools.product(*ranges):
            yield Coloring(vcol, edge_color, dict(zip(p.triangles, idx)))


def _partial_sum(p: _Plan, first: str | None = None) -> tuple[complex, int]:
    b = p.b
    n = len(p.edges)
    col: list[str] = [""] * n
    memo: dict[tuple[int, TetKey], complex] = {}
    plus, minus = b.tet_plus, b.tet_minus
    fusion = b.fusion
    total = 0j
    count = 0
    deferred: list[int] = []

    def amp(sign: int, key: TetKey) -> complex:
        k = (sign, key)
        v = memo.get(k)
        if v is None:
            v = memo[k] = (plus if sign > 0 else minus).get(key, 0j)
        return v

    def tet_key(es, ts_idx) -> TetKey:
        i, j, k, l, m, nn = (col[x] for x in es)
        return (i, j, k, l, m, nn) + ts_idx

    def leaf(w: complex) -> None:
        nonlocal total, count
        if not deferred:
            total += w
            count += 1
            return
        multi = sorted({tr for ti in deferred for tr in p.tets[ti][1]
                        if _mult(fusion, col, p.tri_edges[tr]) > 1})
        ranges = [range(_mult(fusion, col, p.tri_edges[tr])) for tr in multi]
        sub = 0j
        for idx in itertools.product(*ranges):
            tidx = dict(zip(multi, idx))
            prod = w
            for ti in deferred:
                es, ts, eps = p.tets[ti]
                prod *= amp(eps, tet_key(es, tuple(tidx.get(tr, 0) for tr in ts)))
            sub += prod
            count += 1
        total += sub

    def rec(i: int, w: complex) -> None:
        if i == n:
            leaf(w)
            return
        dom = p.domains[i] if (i or first is None) else (first,)
        for s in dom:
            col[i] = s
            ok = True
            for tr in p.tri_at[i]:
                x, y, z = p.tri_edges[tr]
                if fusion.get((col[x], col[y]), {}).get(col[z], 0) == 0:
                    ok = False
                    break
            if not ok:
                continue
            w2 = w * p.dims[i][s]
            pushed = 0
            for ti in p.tet_at[i]:
                es, ts, eps = p.tets[ti]
                if all(_mult(fusion, col, p.tri_edges[tr]) == 1 for tr in ts):
                    w2 *= amp(eps, tet_key(es, (0, 0, 0, 0)))
                else:
                    deferred.append(ti)
                    pushed += 1
            rec(i + 1, w2)
            if pushed:
                del deferred[-pushed:]

    if n == 0:
        leaf(1 + 0j)
    else:
        rec(0, 1 + 0j)
    return total, count


def _mult(fusion, col, tri) -> int:
    x, y, z = tri
    return fusion.get((col[x], col[y]), {}).get(col[z], 0)


def _partial_worker(args) -> tuple[complex, int]:
    b, t, objects, first = args
    return _partial_sum(_Plan(b, t, objects), first)


def invariant(
    b: Biparcel,
    t: DirectedTriangulation,
    tolerance: float | None = None,
    threads: int = 1,
    objects: Mapping[int, str] | None = None,
) -> Amplitude:
    """The state sum of ``t`` colored by ``b``.

    With ``threads > 1`` the search tree is split on the first edge's color
    and partial sums are added in that fixed order.
    """
    tol = default_tolerance() if tolerance is None else tolerance
    p = _Plan(b, t, objects)
    if threads <= 1 or not p.edges or len(p.domains[0]) < 2:
        total, count = _partial_sum(p)
    else:
        jobs = [(b, t, objects, s) for s in p.domains[0]]
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_partial_worker, jobs))
        total = 0j
        count = 0
        for v, n in parts:
            total += v
            count += n
    return Amplitude(total * p.vertex_factor, count, tol)


def coloring_weight(b: Biparcel, t: DirectedTriangulation, lam: Coloring, objects=None) -> complex:
    """Weight of a single coloring, evaluated directly from its definition."""
    _, arrows = resolve_delta(b, t, objects)
    w = 1 + 0j
    for v, x in lam.vertex_color.items():
        w /= b.constants[x]
    for e, s in lam.edge_color.items():
        w *= b.dim(s)
    for idx, (tet, _) in enumerate(t.complex.tets):
        v0, v1, v2, v3 = t.sort_vertices(tet)
        ec = lam.edge_color
        key = (
            ec[_e(v0, v1)], ec[_e(v1, v2)], ec[_e(v2, v3)], ec[_e(v0, v3)], ec[_e(v0, v2)], ec[_e(v1, v3)],
            lam.triangle_color[tuple(sorted((v0, v1, v2)))], lam.triangle_color[tuple(sorted((v1, v2, v3)))],
            lam.triangle_color[tuple(sorted((v0, v1, v3)))], lam.triangle_color[tuple(sorted((v0, v2, v3)))],
        )
        w *= b.table(t.epsilon(idx)).get(key, 0j)
    return w


# Dijkgraaf-Witten oracle: deliberately self-contained.


def dw_oracle(
    group: FiniteGroupoid,
    omega: Mapping[tuple[str, str, str], complex],
    t: DirectedTriangulation,
    tolerance: float | None = None,
) -> Amplitude:
    """|G|^-V * sum over flat G-labelings of prod_tet omega(g01, g12, g23)^eps."""
    tol = default_tolerance() if tolerance is None else tolerance
    c = t.complex
    if len(set(c.vertices.values())) != 1:
        raise Unsupported("the Dijkgraaf-Witten oracle handles single-stratum triangulations only")
    if len(group.objects) != 1:
        raise Unsupported("the oracle needs a group (one-object groupoid)")
    rank = {}
    for d, vs in t.order.items():
        for i, v in enumerate(vs):
            rank[v] = i
    elems = sorted(group.arrows)
    mul = {(g, h): group.compose(g, h) for g in elems for h in elems}
    pairs = sorted({(min(a, b, key=rank.get), max(a, b, key=rank.get))
                    for tet, _ in c.tets for a, b in itertools.combinations(tet, 2)},
                   key=lambda uv: (rank[uv[1]], rank[uv[0]]))
    tris = []
    for tet, _ in c.tets:
        for tri in itertools.combinations(sorted(tet, key=rank.get), 3):
            tris.append(tri)
    tris = sorted(set(tris), key=lambda x: (rank[x[2]], rank[x[1]], rank[x[0]]))
    # a triangle is checkable once its latest edge (by pair order) is labeled
    where = {uv: i for i, uv in enumerate(pairs)}
    checks: list[list[tuple]] = [[] for _ in pairs]
    for u, v, w in tris:
        checks[max(where[(u, v)], where[(v, w)], where[(u, w)])].append(((u, v), (v, w), (u, w)))
    tets = []
    for tet, sign in c.tets:
        srt = sorted(tet, key=rank.get)
        inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if tet.index(srt[i]) > tet.index(srt[j]))
        eps = sign if inversions % 2 == 0 else -sign
        tets.append(((srt[0], srt[1]), (srt[1], srt[2]), (srt[2], srt[3]), eps))
    label: dict[tuple[int, int], str] = {}
    total = 0j
    flat = 0

    def walk(i: int) -> None:
        nonlocal total, flat
        if i == len(pairs):
            flat += 1
            w = 1 + 0j
            for a, bb, cc, eps in tets:
                val = omega[(label[a], label[bb], label[cc])]
                w *= val if eps > 0 else 1 / val
            total += w
            return
        for g in elems:
            label[pairs[i]] = g
            if all(mul[(label[a], label[bb])] == label[cc] for a, bb, cc in checks[i]):
                walk(i + 1)
        del label[pairs[i]]

    walk(0)
    return Amplitude(total / len(elems) ** len(c.vertices), flat, tol)


# local move models on the ordered 4-simplex


def _base_chains(base: FiniteCategory) -> list[tuple[list[str], dict[tuple[int, int], str]]]:
    """Composable 4-chains in the base, as (vertex objects, arrow for each u<v)."""
    out = []
    arrows = sorted(base.arrows)
    for seq in itertools.product(arrows, repeat=4):
        if any(base.tgt(seq[i]) != base.src(seq[i + 1]) for i in range(3)):
            continue
        objs = [base.src(seq[0])] + [base.tgt(a) for a in seq]
        arr: dict[tuple[int, int], str] = {}
        ok = True
        for u in range(5):
            arr[(u, u)] = base.identities[objs[u]]
        for u in range(4):
            arr[(u, u + 1)] = seq[u]
        for length in range(2, 5):
            for u in range(5 - length):
                v = u + length
                a = base.try_compose(arr[(u, v - 1)], arr[(v - 1, v)])
                b2 = base.try_compose(arr[(u, u + 1)], arr.get((u + 1, v), ""))
                if a is None or (b2 is not None and b2 != a):
                    ok = False
                    break
                arr[(u, v)] = a
            if not ok:
                break
        if ok:
            out.append((objs, {k: v for k, v in arr.items() if k[0] < k[1]}))
    return out


def _drop(i: int) -> tuple[int, ...]:
    return tuple(v for v in range(5) if v != i)


def _local_side(
    b: Biparcel,
    objs: list[str],
    tets: list[tuple[tuple[int, ...], int]],
    interior_vertices: Sequence[int],
    interior_edges: list[tuple[int, int]],
    interior_tris: list[tuple[int, int, int]],
    arr: dict[tuple[int, int], str],
    ecol: dict[tuple[int, int], str],
    tcol: dict[tuple[int, int, int], int],
) -> complex:
    total = 0j
    fibers = [b.over(arr[e]) for e in interior_edges]
    for labels in itertools.product(*fibers):
        ec = dict(ecol)
        ec.update(zip(interior_edges, labels))
        mults = [b.N(ec[(u, v)], ec[(v, w)], ec[(u, w)]) for u, v, w in interior_tris]
        if any(m == 0 for m in mults):
            continue
        w0 = 1 + 0j
        for v in interior_vertices:
            w0 /= b.constants[objs[v]]
        for e, s in zip(interior_edges, labels):
            w0 *= b.dim(s)
        for idx in itertools.product(*(range(m) for m in mults)):
            tc = dict(tcol)
            tc.update(zip(interior_tris, idx))
            w = w0
            for (v0, v1, v2, v3), eps in tets:
                key = (ec[(v0, v1)], ec[(v1, v2)], ec[(v2, v3)], ec[(v0, v3)], ec[(v0, v2)], ec[(v1, v3)],
                       tc[(v0, v1, v2)], tc[(v1, v2, v3)], tc[(v0, v1, v3)], tc[(v0, v2, v3)])
                w *= b.table(eps).get(key, 0j)
            total += w
    return total


def _boundary_colorings(b, arr, edges, tris):
    """Admissible colorings of the given edges and triangles (backtracking)."""
    edges = sorted(edges)
    pos = {e: i for i, e in enumerate(edges)}
    at: list[list[tuple[int, int, int]]] = [[] for _ in edges]
    for tri in tris:
        u, v, w = tri
        at[max(pos[(u, v)], pos[(v, w)], pos[(u, w)])].append(tri)
    col: dict[tuple[int, int], str] = {}

    def rec(i):
        if i == len(edges):
            ranges = [range(b.N(col[(u, v)], col[(v, w)], col[(u, w)])) for u, v, w in tris]
            for idx in itertools.product(*ranges):
                yield dict(col), dict(zip(tris, idx))
            return
        for s in b.over(arr[edges[i]]):
            col[edges[i]] = s
            if all(b.N(col[(u, v)], col[(v, w)], col[(u, w)]) > 0 for u, v, w in at[i]):
                yield from rec(i + 1)
        col.pop(edges[i], None)

    yield from rec(0)


def _move_models() -> list[dict[str, Any]]:
    models = []
    all_edges = list(itertools.combinations(range(5), 2))
    all_tris = list(itertools.combinations(range(5), 3))
    for i, j in itertools.combinations(range(5), 2):
        shared = tuple(v for v in range(5) if v not in (i, j))
        around = [tr for tr in all_tris if i in tr and j in tr]
        models.append(dict(
            move="2-3", label=f"2-3/split{i}{j}",
            two=[(_drop(i), (-1) ** i), (_drop(j), (-1) ** j)],
            three=[(_drop(k), -((-1) ** k)) for k in range(5) if k not in (i, j)],
            bd_edges=[e for e in all_edges if e != (i, j)],
            bd_tris=[tr for tr in all_tris if tr != shared and tr not in around],
            a_int=([], [], [shared]),
            b_int=([], [(i, j)], around),
        ))
    for p in range(5):
        models.append(dict(
            move="1-4", label=f"1-4/vertex{p}",
            two=[(_drop(p), (-1) ** p)],
            three=[(_drop(k), -((-1) ** k)) for k in range(5) if k != p],
            bd_edges=[e for e in all_edges if p not in e],
            bd_tris=[tr for tr in all_tris if p not in tr],
            a_int=([], [], []),
            b_int=([p], [e for e in all_edges if p in e], [tr for tr in all_tris if p in tr]),
        ))
    return models


def local_move_report(b: Biparcel, tolerance: float) -> Report:
    """Per-boundary-coloring equality of both sides of every 2-3 and 1-4 model.

    Each model places the moved simplices inside an ordered 4-simplex whose
    vertices and edges are labeled by a composable 4-chain of the base, so
    defect configurations get exercised too. Both ambient orientations run.
    """
    rep = Report()
    failures: dict[str, list] = {"2-3": [], "1-4": []}
    checked = {"2-3": 0, "1-4": 0}
    chains = _base_chains(b.base)
    for model in _move_models():
        for objs, arr in chains:
            for orient in (1, -1):
                side_a = [(t, s * orient) for t, s in model["two"]]
                side_b = [(t, s * orient) for t, s in model["three"]]
                for ecol, tcol in _boundary_colorings(b, arr, model["bd_edges"], model["bd_tris"]):
                    va = _local_side(b, objs, side_a, *model["a_int"], arr, ecol, tcol)
                    vb = _local_side(b, objs, side_b, *model["b_int"], arr, ecol, tcol)
                    checked[model["move"]] += 1
                    if abs(va - vb) > tolerance:
                        failures[model["move"]].append({
                            "model": model["label"], "orientation": orient, "objects": objs,
                            "edges": {f"{u}{v}": s for (u, v), s in sorted(ecol.items())},
                            "lhs": va, "rhs": vb,
                        })
    for mv in ("2-3", "1-4"):
        rep.record(f"move-{mv}", failures[mv], f"{checked[mv]} boundary colorings compared")
    return rep


# move-invariance harness


@dataclass
class InvarianceTrace:
    steps: list[dict] = field(default_factory=list)
    tolerance: float = 1e-9
    final: DirectedTriangulation | None = None

    @property
    def max_deviation(self) -> float:
        return max((s["deviation"] for s in self.steps), default=0.0)

    @property
    def ok(self) -> bool:
        return self.max_deviation <= self.tolerance

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "trace": self.steps,
        }


def invariance_check(
    b: Biparcel,
    t: DirectedTriangulation,
    move_sequence: Sequence[str | tuple[str, Any]],
    tolerance: float | None = None,
    rng: random.Random | None = None,
) -> InvarianceTrace:
    """Apply moves in turn and compare each invariant with the starting value.

    A move given without a site is applied at the inverse site when it undoes
    the previous move, otherwise at a random (``rng``) or first applicable site.
    """
    from .moves import INVERSE, applicable_sites, inverse_site, pachner_move

    tol = default_tolerance() if tolerance is None else tolerance
    start = invariant(b, t, tol)
    trace = InvarianceTrace(tolerance=tol)
    trace.steps.append({"index": 0, "move": None, "site": None, "re": start.value.real,
                        "im": start.value.imag, "deviation": 0.0, "tets": len(t.complex.tets)})
    cur = t
    prev: tuple[str, Any, DirectedTriangulation] | None = None
    for n, item in enumerate(move_sequence, start=1):
        move, site = (item, None) if isinstance(item, str) else item
        try:
            if site is None and prev is not None and INVERSE[prev[0]] == move:
                site = inverse_site(prev[2], cur, prev[0], prev[1])
            if site is None:
                sites = applicable_sites(cur, move)
                if not sites:
                    raise InapplicableSite(f"no applicable site for {move}")
                site = sites[rng.randrange(len(sites))] if rng else sites[0]
            nxt = pachner_move(cur, move, site)
        except (InapplicableSite, WouldBreakFlaglikeness, WouldBreakDirectability) as exc:
            exc.args = (f"move {n} ({move}): {exc.args[0]}",)
            exc.index = n
            raise
        val = invariant(b, nxt, tol)
        trace.steps.append({
            "index": n, "move": move, "site": list(site) if not isinstance(site, int) else [site],
            "re": val.value.real, "im": val.value.imag,
            "deviation": abs(val.value - start.value), "tets": len(nxt.complex.tets),
        })
        prev = (move, site, cur)
        cur = nxt
    trace.final = cur
    return trace
