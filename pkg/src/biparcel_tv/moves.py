"""Flag-like Pachner moves on directed triangulations.

Bulk moves (1-4, 4-1, 2-3, 3-2) may only touch the 3-dimensional stratum.
The extended moves subdivide (or weld) a surface triangle shared by two
tetrahedra (2-6 / 6-2) or a knot edge with a three-edge link (3-6 / 6-3).

Sites are tuples of vertex ids::

    1-4            tetrahedron
    2-3, 2-6       triangle
    3-2, 3-6       edge
    4-1, 6-2, 6-3  vertex
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Sequence

from .complex import (
    DirectedTriangulation,
    Simplex,
    StratifiedComplex,
    direct,
    induced_face_orientation,
    validate_flaglike,
)
from .errors import (
    InapplicableSite,
    InvalidStratification,
    NotDirectable,
    DeltaInconsistent,
    WouldBreakDirectability,
    WouldBreakFlaglikeness,
)

BULK_MOVES = ("1-4", "4-1", "2-3", "3-2")
DEFECT_MOVES = ("2-6", "6-2", "3-6", "6-3")
MOVES = BULK_MOVES + DEFECT_MOVES
INVERSE = {"1-4": "4-1", "4-1": "1-4", "2-3": "3-2", "3-2": "2-3",
           "2-6": "6-2", "6-2": "2-6", "3-6": "6-3", "6-3": "3-6"}
_SITE_SIZE = {"1-4": 4, "4-1": 1, "2-3": 3, "3-2": 2, "2-6": 3, "6-2": 1, "3-6": 2, "6-3": 1}


def _norm_site(move: str, site) -> Simplex:
    if move not in _SITE_SIZE:
        raise InapplicableSite(f"unknown move {move!r}")
    if isinstance(site, int):
        site = (site,)
    site = tuple(sorted(int(v) for v in site))
    if len(site) != _SITE_SIZE[move] or len(set(site)) != len(site):
        raise InapplicableSite(f"move {move} needs a site of {_SITE_SIZE[move]} vertices, got {site}", site)
    return site


def _link_vertices(c: StratifiedComplex, s: Simplex) -> tuple[list[Simplex], set[int]]:
    tets = [tuple(sorted(c.tets[i][0])) for i in c.tets_of.get(s, [])]
    link = {v for t in tets for v in t} - set(s)
    return tets, link


def _orient(new: Simplex, removed: list[tuple[Simplex, int]]) -> int:
    """Sign for a new tet so it induces the removed region's orientation on a shared boundary face."""
    for face in itertools.combinations(new, 3):
        owners = [(t, s) for t, s in removed if set(face) <= set(t)]
        if len(owners) == 1:
            t, s = owners[0]
            return induced_face_orientation(t, s, face) * induced_face_orientation(new, 1, face)
    raise AssertionError(f"new tet {new} shares no boundary face with the removed region")


def _replace(
    t: DirectedTriangulation,
    removed_idx: Iterable[int],
    new_tets: list[Simplex],
    new_vertex: tuple[int, int, int | None] | None = None,
    drop_vertex: int | None = None,
) -> DirectedTriangulation:
    c = t.complex
    removed_idx = set(removed_idx)
    removed = [c.tets[i] for i in sorted(removed_idx)]
    kept = [c.tets[i] for i in range(len(c.tets)) if i not in removed_idx]
    existing = {tuple(sorted(x)) for x, _ in kept}
    added = []
    for n in new_tets:
        if tuple(sorted(n)) in existing:
            raise InapplicableSite(f"tetrahedron {tuple(sorted(n))} already exists", n)
        added.append((tuple(n), _orient(tuple(n), removed)))
    verts = dict(c.vertices)
    order = {d: list(vs) for d, vs in t.order.items()}
    if new_vertex is not None:
        x, stratum, after = new_vertex
        verts[x] = stratum
        seq = order.setdefault(stratum, [])
        seq.insert(seq.index(after) + 1 if after is not None else len(seq), x)
    if drop_vertex is not None:
        del verts[drop_vertex]
        order[c.vertices[drop_vertex]].remove(drop_vertex)
    order = {d: vs for d, vs in order.items() if vs}
    overrides = dict(c.simplex_strata)
    new_c = StratifiedComplex.build(verts, kept + added, overrides)
    live = set(new_c.tets_of)
    new_c = StratifiedComplex.build(verts, kept + added, {k: v for k, v in overrides.items() if k in live})
    bad = new_c.structure_problems()
    if not bad.ok:
        raise InapplicableSite(f"move breaks the closed oriented structure: {bad.failed()}", bad.to_json())
    fl = validate_flaglike(new_c)
    if not fl.ok:
        raise WouldBreakFlaglikeness(f"result is not flag-like: {fl.failed()}", fl.to_json())
    try:
        return direct(new_c, order, t.mode)
    except (NotDirectable, DeltaInconsistent, InvalidStratification) as exc:
        raise WouldBreakDirectability(str(exc), exc.witness) from exc


def _lower_strata(c: StratifiedComplex) -> set[tuple[Simplex, int]]:
    return {(s, c.stratum(s)) for k in range(4) for s in c.simplices[k] if c.stratum(s) < 3}


def _insert_after(t: DirectedTriangulation, site: Simplex, stratum: int) -> int | None:
    same = [v for v in site if t.complex.vertices[v] == stratum]
    return min(same, key=t.position.__getitem__) if same else None


def pachner_move(t: DirectedTriangulation, move: str, site) -> DirectedTriangulation:
    site = _norm_site(move, site)
    c = t.complex
    if move in ("4-1", "6-2", "6-3") and site[0] not in c.vertices:
        raise InapplicableSite(f"no vertex {site[0]}", site)
    if move in ("1-4", "2-3", "3-2", "2-6", "3-6") and site not in c.tets_of:
        raise InapplicableSite(f"{site} is not a simplex of the complex", site)
    new_id = max(c.vertices) + 1
    result = _MOVES[move](t, site, new_id)
    if move in BULK_MOVES and _lower_strata(result.complex) != _lower_strata(c):
        raise WouldBreakFlaglikeness(f"bulk move {move} at {site} alters a lower stratum", site)
    return result


def _move_1_4(t, site, x):
    c = t.complex
    (idx,) = c.tets_of[site]
    if c.stratum(site) != 3:
        raise InapplicableSite("1-4 needs a bulk tetrahedron", site)
    tet = c.tets[idx][0]
    new = [tuple(x if w == v else w for w in tet) for v in tet]
    return _replace(t, [idx], new, (x, 3, None))


def _move_4_1(t, site, _):
    c = t.complex
    (x,) = site
    if c.vertices[x] != 3:
        raise InapplicableSite("4-1 removes a bulk vertex only", site)
    tets, link = _link_vertices(c, (x,))
    if len(tets) != 4 or len(link) != 4:
        raise InapplicableSite(f"vertex {x} does not have a tetrahedral star", site)
    idx = c.tets_of[(x,)]
    one = c.tets[idx[0]][0]
    (w,) = link - set(one)
    new = tuple(w if v == x else v for v in one)
    return _replace(t, idx, [new], drop_vertex=x)


def _move_2_3(t, site, _):
    c = t.complex
    if c.stratum(site) != 3:
        raise InapplicableSite("2-3 needs a bulk triangle", site)
    idx = c.tets_of[site]
    tets, link = _link_vertices(c, site)
    if len(idx) != 2 or len(link) != 2:
        raise InapplicableSite(f"triangle {site} is not shared by two tets with distinct apexes", site)
    d, e = sorted(link)
    if (d, e) in c.tets_of:
        raise InapplicableSite(f"edge {(d, e)} already exists", site)
    a, b, cc = site
    new = [(a, b, d, e), (a, cc, d, e), (b, cc, d, e)]
    return _replace(t, idx, new)


def _move_3_2(t, site, _):
    c = t.complex
    if c.stratum(site) != 3:
        raise InapplicableSite("3-2 needs a bulk edge", site)
    idx = c.tets_of[site]
    tets, link = _link_vertices(c, site)
    if len(idx) != 3 or len(link) != 3:
        raise InapplicableSite(f"edge {site} does not have a three-tet star", site)
    tri = tuple(sorted(link))
    if tri in c.tets_of:
        raise InapplicableSite(f"triangle {tri} already exists", site)
    d, e = site
    new = [tri + (d,), tri + (e,)]
    return _replace(t, idx, new)


def _move_2_6(t, site, x):
    c = t.complex
    if c.stratum(site) != 2:
        raise InapplicableSite("2-6 needs a triangle in the 2-stratum", site)
    idx = c.tets_of[site]
    tets, link = _link_vertices(c, site)
    if len(idx) != 2 or len(link) != 2:
        raise InapplicableSite(f"triangle {site} is not shared by two tets", site)
    new = []
    for i in idx:
        tet = c.tets[i][0]
        new += [tuple(x if w == v else w for w in tet) for v in site]
    return _replace(t, idx, new, (x, 2, _insert_after(t, site, 2)))


def _move_6_2(t, site, _):
    c = t.complex
    (x,) = site
    if c.vertices[x] != 2:
        raise InapplicableSite("6-2 removes a vertex of the 2-stratum", site)
    idx = c.tets_of[(x,)]
    tets, link = _link_vertices(c, (x,))
    if len(idx) != 6 or len(link) != 5:
        raise InapplicableSite(f"vertex {x} does not have a six-tet star", site)
    surf = sorted(v for v in link if c.stratum((x, v)) == 2)
    apex = sorted(link - set(surf))
    if len(surf) != 3 or len(apex) != 2:
        raise InapplicableSite(f"vertex {x} is not the center of a subdivided surface triangle", site)
    expected = {tuple(sorted((x, p, q, a))) for p, q in itertools.combinations(surf, 2) for a in apex}
    if set(tets) != expected:
        raise InapplicableSite(f"star of {x} is not a 2-6 configuration", site)
    if tuple(surf) in c.tets_of:
        raise InapplicableSite(f"triangle {tuple(surf)} already exists", site)
    new = [tuple(surf) + (a,) for a in apex]
    return _replace(t, idx, new, drop_vertex=x)


def _move_3_6(t, site, x):
    c = t.complex
    if c.stratum(site) != 1:
        raise InapplicableSite("3-6 needs an edge in the 1-stratum", site)
    idx = c.tets_of[site]
    tets, link = _link_vertices(c, site)
    if len(idx) != 3 or len(link) != 3:
        raise InapplicableSite(f"edge {site} does not have a three-edge link", site)
    new = []
    for i in idx:
        tet = c.tets[i][0]
        new += [tuple(x if w == v else w for w in tet) for v in site]
    return _replace(t, idx, new, (x, 1, _insert_after(t, site, 1)))


def _move_6_3(t, site, _):
    c = t.complex
    (x,) = site
    if c.vertices[x] != 1:
        raise InapplicableSite("6-3 removes a vertex of the 1-stratum", site)
    idx = c.tets_of[(x,)]
    tets, link = _link_vertices(c, (x,))
    if len(idx) != 6 or len(link) != 5:
        raise InapplicableSite(f"vertex {x} does not have a six-tet star", site)
    knot = sorted(v for v in link if c.stratum((x, v)) == 1)
    rest = sorted(link - set(knot))
    if len(knot) != 2 or len(rest) != 3:
        raise InapplicableSite(f"vertex {x} is not interior to a subdivided knot edge", site)
    expected = {tuple(sorted((x, k, p, q))) for k in knot for p, q in itertools.combinations(rest, 2)}
    if set(tets) != expected:
        raise InapplicableSite(f"star of {x} is not a 3-6 configuration", site)
    if tuple(knot) in c.tets_of:
        raise InapplicableSite(f"edge {tuple(knot)} already exists", site)
    new = [tuple(knot) + pq for pq in itertools.combinations(rest, 2)]
    return _replace(t, idx, new, drop_vertex=x)


_MOVES = {
    "1-4": _move_1_4, "4-1": _move_4_1, "2-3": _move_2_3, "3-2": _move_3_2,
    "2-6": _move_2_6, "6-2": _move_6_2, "3-6": _move_3_6, "6-3": _move_6_3,
}


def candidate_sites(t: DirectedTriangulation, move: str) -> list[Simplex]:
    c = t.complex
    size = _SITE_SIZE[move]
    if size == 1:
        return [(v,) for v in c.vertices]
    return list(c.simplices[size - 1])


def applicable_sites(t: DirectedTriangulation, move: str) -> list[Simplex]:
    out = []
    for s in candidate_sites(t, move):
        try:
            pachner_move(t, move, s)
        except (InapplicableSite, WouldBreakFlaglikeness, WouldBreakDirectability):
            continue
        out.append(s)
    return out


def random_move(
    t: DirectedTriangulation,
    rng: random.Random,
    moves: Sequence[str] = BULK_MOVES,
) -> tuple[str, Simplex, DirectedTriangulation] | None:
    """Pick a uniformly random applicable (move, site); None when nothing applies."""
    options = [(m, s) for m in moves for s in applicable_sites(t, m)]
    if not options:
        return None
    m, s = options[rng.randrange(len(options))]
    return m, s, pachner_move(t, m, s)


def inverse_site(before: DirectedTriangulation, after: DirectedTriangulation, move: str, site) -> Simplex:
    """The site at which ``INVERSE[move]`` undoes ``move``."""
    site = _norm_site(move, site)
    if move in ("1-4", "2-6", "3-6"):
        (x,) = set(after.complex.vertices) - set(before.complex.vertices)
        return (x,)
    if move == "2-3":
        return tuple(sorted(set(after.complex.edges) - set(before.complex.edges)))[0]
    if move == "3-2":
        return tuple(sorted(set(after.complex.triangles) - set(before.complex.triangles)))[0]
    if move == "4-1":
        (tet,) = after.complex.tet_set() - before.complex.tet_set()
        return tet
    if move == "6-2":
        return tuple(sorted(set(after.complex.triangles) - set(before.complex.triangles)))[0]
    if move == "6-3":
        return tuple(sorted(set(after.complex.edges) - set(before.complex.edges)))[0]
    raise InapplicableSite(f"unknown move {move!r}")
