"""Builders that turn familiar algebraic data into biparcels.

Every builder is a pure function of its inputs. Group data enters as a
3-cochain on a one-object groupoid; fusion data enters as a one-object
biparcel that can be spread over a groupoid or pulled back along a functor.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .biparcel import Biparcel, BicategoryData, SimpleArrow, TetKey, validate
from .errors import InvalidArgument, InvalidCocycle, InvalidSector, ValidationFailed
from .gaunt import (
    FiniteCategory,
    FiniteGroupoid,
    Functor,
    chaotic_preorder,
    cyclic_group_table,
    group_as_groupoid,
    group_elements,
    terminal_category,
)

PHI = (1 + math.sqrt(5)) / 2


# 3-cochains


@dataclass(frozen=True)
class Cochain3:
    group: FiniteGroupoid
    values: Mapping[tuple[str, str, str], complex]

    def __call__(self, g: str, h: str, k: str) -> complex:
        return self.values[(g, h, k)]

    @property
    def normalized(self) -> bool:
        e = group_elements(self.group)[0]
        return all(v == 1 for (g, h, k), v in self.values.items() if e in (g, h, k))

    def to_json(self) -> dict:
        els = group_elements(self.group)
        idx = {g: i for i, g in enumerate(els)}
        return {
            "group": {
                "elements": els,
                "table": [[idx[self.group.compose(g, h)] for h in els] for g in els],
            },
            "values": [
                {"g": g, "h": h, "k": k, "re": complex(v).real, "im": complex(v).imag}
                for (g, h, k), v in sorted(self.values.items())
            ],
        }

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> "Cochain3":
        try:
            grp = group_as_groupoid(d["group"]["table"], d["group"]["elements"])
            vals = {
                (str(r["g"]), str(r["h"]), str(r["k"])): complex(r["re"], r.get("im", 0.0))
                for r in d["values"]
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgument(f"malformed cochain: {exc}") from exc
        return make_cochain(grp, vals)


def make_cochain(group: FiniteGroupoid, values: Mapping[tuple[str, str, str], complex]) -> Cochain3:
    els = group_elements(group)
    missing = [t for t in itertools.product(els, repeat=3) if t not in values]
    if missing:
        raise InvalidArgument(f"cochain is not total; first missing triple {missing[0]}", missing[0])
    zero = [t for t, v in values.items() if v == 0]
    if zero:
        raise InvalidArgument(f"cochain vanishes at {zero[0]}", zero[0])
    return Cochain3(group, {t: complex(values[t]) for t in itertools.product(els, repeat=3)})


def cyclic_group(n: int) -> FiniteGroupoid:
    return group_as_groupoid(cyclic_group_table(n))


def trivial_cochain(group: FiniteGroupoid) -> Cochain3:
    els = group_elements(group)
    return Cochain3(group, {t: 1 + 0j for t in itertools.product(els, repeat=3)})


def standard_cocycle(n: int, p: int = 1) -> Cochain3:
    """The cocycle exp(2 pi i p a (b + c - [b + c]_n) / n^2) on Z/n (elements "0".."n-1")."""
    grp = cyclic_group(n)
    vals = {}
    for a, b, c in itertools.product(range(n), repeat=3):
        carry = b + c - (b + c) % n
        vals[(str(a), str(b), str(c))] = cmath.exp(2j * math.pi * p * a * carry / n**2)
    return Cochain3(grp, vals)


def check_cocycle(c: Cochain3, tolerance: float = 1e-9) -> tuple[bool, tuple[str, str, str, str] | None]:
    """Test w(h,k,l) w(g,hk,l) w(g,h,k) == w(gh,k,l) w(g,h,kl); return the first failing (g,h,k,l)."""
    G = c.group
    els = group_elements(G)
    w = c.values
    for g, h, k, l in itertools.product(els, repeat=4):
        hk, gh, kl = G.compose(h, k), G.compose(g, h), G.compose(k, l)
        lhs = w[(h, k, l)] * w[(g, hk, l)] * w[(g, h, k)]
        rhs = w[(gh, k, l)] * w[(g, h, kl)]
        if abs(lhs - rhs) > tolerance:
            return False, (g, h, k, l)
    return True, None


# fusion data over a one-object base


def _require_valid(b: Biparcel) -> Biparcel:
    rep = validate(b)
    if not rep.ok:
        raise ValidationFailed(f"constructed data fails {rep.failed()}", rep.to_json())
    return b


def fusion_biparcel(
    simples: Sequence[str],
    dims: Mapping[str, complex],
    N: Iterable[tuple[str, str, str, int]] | Mapping[tuple[str, str], Mapping[str, int]],
    tet_plus: Mapping[TetKey, complex],
    tet_minus: Mapping[TetKey, complex],
    duals: Mapping[str, str] | None = None,
    unit: str | None = None,
    check: bool = True,
) -> Biparcel:
    """A fusion category as a biparcel over the one-object base.

    ``unit`` defaults to the first simple; ``duals`` default to self-duality.
    """
    base = terminal_category()
    (obj,) = base.objects
    ida = base.identities[obj]
    unit = simples[0] if unit is None else unit
    duals = {s: s for s in simples} if duals is None else duals
    if isinstance(N, Mapping):
        N = [(a, b, c, m) for (a, b), row in N.items() for c, m in row.items()]
    b = Biparcel.build(
        base,
        [SimpleArrow(s, ida, complex(dims[s]), duals.get(s)) for s in simples],
        {obj: unit},
        N,
        tet_plus,
        tet_minus,
    )
    return _require_valid(b) if check else b


def trivial() -> Biparcel:
    key = ("1",) * 6 + (0, 0, 0, 0)
    return fusion_biparcel(["1"], {"1": 1}, [("1", "1", "1", 1)], {key: 1}, {key: 1})


def _group_tables(G: FiniteGroupoid, omega: Mapping[tuple[str, str, str], complex]):
    plus, minus = {}, {}
    for g, h, k in itertools.product(sorted(G.arrows), repeat=3):
        gh, hk = G.try_compose(g, h), G.try_compose(h, k)
        if gh is None or hk is None:
            continue
        ghk = G.compose(gh, k)
        key = (g, h, k, ghk, gh, hk, 0, 0, 0, 0)
        w = complex(omega[(g, h, k)])
        plus[key] = w
        minus[key] = 1 / w
    return plus, minus


def vec_group_fusion(omega: Cochain3, check: bool = True) -> Biparcel:
    """Vec_G^omega: one simple per group element, all over the single identity arrow."""
    G = omega.group
    els = group_elements(G)
    fusion = [(g, h, G.compose(g, h), 1) for g in els for h in els]
    plus, minus = _group_tables(G, omega.values)
    return fusion_biparcel(
        els, {g: 1 for g in els}, fusion, plus, minus,
        duals={g: G.inverse(g) for g in els}, unit=els[0], check=check,
    )


def graded_vec(omega: Cochain3) -> Biparcel:
    """Vec_G^omega spread over the group viewed as a one-object groupoid (simple g over arrow g)."""
    G = omega.group
    els = group_elements(G)
    (obj,) = G.objects
    simples = [SimpleArrow(g, g, 1 + 0j, G.inverse(g)) for g in els]
    fusion = [(g, h, G.compose(g, h), 1) for g in els for h in els]
    plus, minus = _group_tables(G, omega.values)
    return BicategoryData(G, simples, {obj: G.identities[obj]}, fusion, plus, minus)


def fibonacci_symbol(labels: Sequence[str], tau: str = "tau") -> float:
    """Tetrahedrally symmetric 6j value for Fibonacci, from the set of tau-colored edges.

    Only admissible configurations occur: 0 tau edges, a star of 3, four
    (two opposite trivial edges), five, or all six.
    """
    n = sum(1 for x in labels if x == tau)
    if n == 0:
        return 1.0
    if n == 3:
        return PHI ** -0.5
    if n in (4, 5):
        return 1 / PHI
    if n == 6:
        return -(PHI ** -2)
    raise InvalidArgument(f"inadmissible Fibonacci edge labels {tuple(labels)}")


def fibonacci(check: bool = True) -> Biparcel:
    one, tau = "1", "tau"
    fusion = [(one, one, one, 1), (one, tau, tau, 1), (tau, one, tau, 1), (tau, tau, one, 1), (tau, tau, tau, 1)]
    allowed = {(a, b, c) for a, b, c, _ in fusion}
    table = {}
    for i, j, k, l, m, n in itertools.product((one, tau), repeat=6):
        if (i, j, m) in allowed and (j, k, n) in allowed and (i, n, l) in allowed and (m, k, l) in allowed:
            table[(i, j, k, l, m, n, 0, 0, 0, 0)] = fibonacci_symbol((i, j, k, l, m, n), tau)
    return fusion_biparcel([one, tau], {one: 1, tau: PHI}, fusion, table, dict(table), check=check)


# pullback and sharp


def pullback(d: Biparcel, phi: Functor, check: bool = True) -> Biparcel:
    """Restrict ``d`` (over phi's target) to a biparcel over phi's source.

    The simple ``s`` over ``phi(g)`` becomes ``"s@g"`` over ``g``. A dual is
    kept only when ``g`` has a two-sided inverse in the source.
    """
    phi.check()
    D, G = d.base, phi.source
    if set(D.arrows) != set(phi.target.arrows):
        raise InvalidArgument("functor target is not the base of the data being pulled back")

    def tag(s: str, g: str) -> str:
        return f"{s}@{g}"

    inverse: dict[str, str] = {}
    for g, (x, y) in G.arrows.items():
        for h in G.hom(y, x):
            if G.try_compose(g, h) == G.identities[x] and G.try_compose(h, g) == G.identities[y]:
                inverse[g] = h
    simples = []
    for g in sorted(G.arrows):
        for s in d.over(phi(g)):
            sd = d.simples[s].dual
            dual = None
            if sd is not None and g in inverse and d.simples[sd].gamma_arrow == phi(inverse[g]):
                dual = tag(sd, inverse[g])
            simples.append(SimpleArrow(tag(s, g), g, d.dim(s), dual))
    units = {x: tag(d.identity_simples[phi.object_map[x]], G.identities[x]) for x in G.objects}
    fusion = []
    for (g1, g2), g3 in G.table.items():
        for a in d.over(phi(g1)):
            for b in d.over(phi(g2)):
                for c, m in d.fusion.get((a, b), {}).items():
                    fusion.append((tag(a, g1), tag(b, g2), tag(c, g3), m))
    index: dict[tuple[str, str, str], list[tuple[TetKey, int]]] = {}
    for sign, tab in ((1, d.tet_plus), (-1, d.tet_minus)):
        for key in tab:
            arr = tuple(d.simples[s].gamma_arrow for s in key[:3])
            index.setdefault(arr, []).append((key, sign))
    plus: dict[TetKey, complex] = {}
    minus: dict[TetKey, complex] = {}
    for g01, g12, g23 in itertools.product(sorted(G.arrows), repeat=3):
        g02, g13 = G.try_compose(g01, g12), G.try_compose(g12, g23)
        if g02 is None or g13 is None:
            continue
        g03 = G.try_compose(g02, g23)
        if g03 is None or G.try_compose(g01, g13) != g03:
            continue
        gs = (g01, g12, g23, g03, g02, g13)
        for key, sign in index.get((phi(g01), phi(g12), phi(g23)), ()):
            new = tuple(tag(s, g) for s, g in zip(key[:6], gs)) + key[6:]
            (plus if sign > 0 else minus)[new] = d.table(sign)[key]
    out = Biparcel.build(G, simples, units, fusion, plus, minus)
    return _require_valid(out) if check else out


def pointed_biparcel(
    G: FiniteGroupoid,
    omega: Cochain3,
    gamma: FiniteCategory,
    phi: Functor,
    check: bool = True,
) -> Biparcel:
    """One dimension-1 simple per arrow of ``gamma``, amplitudes read off ``omega`` through ``phi``.

    With ``check`` the cochain must be a normalized cocycle.
    """
    if set(omega.group.arrows) != set(G.arrows):
        raise InvalidArgument("cochain is defined on a different group")
    if phi.source is not gamma and phi.source != gamma:
        raise InvalidArgument("functor source differs from the given base")
    phi.check()
    if check:
        if not omega.normalized:
            raise InvalidCocycle("cochain is not normalized")
        ok, witness = check_cocycle(omega)
        if not ok:
            raise InvalidCocycle(f"cocycle condition fails at {witness}", witness)
    return pullback(graded_vec(omega), phi, check=check)


def sharp_construction(c: Biparcel, g: FiniteGroupoid, check: bool = True) -> Biparcel:
    """C#G: for every groupoid arrow f a copy ``"s.f"`` of each simple s of the fusion data C."""
    if len(c.base.objects) != 1:
        raise InvalidArgument("sharp construction needs one-object fusion data")
    (cobj,) = c.base.objects
    unit = c.identity_simples[cobj]
    inv = {f: g.inverse(f) for f in g.arrows}

    def tag(s: str, f: str) -> str:
        return f"{s}.{f}"

    simples = [
        SimpleArrow(tag(s.id, f), f, s.dim, None if s.dual is None else tag(s.dual, inv[f]))
        for f in sorted(g.arrows)
        for s in c.simples.values()
    ]
    fusion = [
        (tag(a, f1), tag(b, f2), tag(cc, f3), m)
        for (f1, f2), f3 in g.table.items()
        for (a, b), row in c.fusion.items()
        for cc, m in row.items()
    ]
    plus: dict[TetKey, complex] = {}
    minus: dict[TetKey, complex] = {}
    for f01, f12, f23 in itertools.product(sorted(g.arrows), repeat=3):
        f02, f13 = g.try_compose(f01, f12), g.try_compose(f12, f23)
        if f02 is None or f13 is None:
            continue
        fs = (f01, f12, f23, g.compose(f02, f23), f02, f13)
        for src, dst in ((c.tet_plus, plus), (c.tet_minus, minus)):
            for key, v in src.items():
                dst[tuple(tag(s, f) for s, f in zip(key[:6], fs)) + key[6:]] = v
    out = BicategoryData(g, simples, {x: tag(unit, g.identities[x]) for x in g.objects}, fusion, plus, minus)
    return _require_valid(out) if check else out


# multifusion sectors


def multifusion_sectors(
    simples: Iterable[SimpleArrow],
    sector: Mapping[str, tuple[Any, Any]],
    units: Mapping[Any, str],
    fusion: Iterable[tuple[str, str, str, int]],
    tet_plus: Mapping[TetKey, complex],
    tet_minus: Mapping[TetKey, complex],
    check: bool = True,
) -> Biparcel:
    """Split multifusion data with unit summands ``units[j]`` into hom-sectors over Ch(J).

    ``sector[s] = (i, j)`` places s in the summand ``I_i s I_j``. The
    ``gamma_arrow`` of the given simples is ignored.
    """
    J = list(units)
    base = chaotic_preorder(J)
    name = {str(j): j for j in J}

    def arrow(i: Any, j: Any) -> str:
        return base.hom(str(i), str(j))[0]

    simples = list(simples)
    for s in simples:
        if s.id not in sector:
            raise InvalidSector(f"simple {s.id!r} has no sector", s.id)
        i, j = sector[s.id]
        if str(i) not in name or str(j) not in name:
            raise InvalidSector(f"simple {s.id!r} lies in unknown sector {(i, j)}", s.id)
    for j, u in units.items():
        if tuple(sector.get(u, ())) != (j, j):
            raise InvalidSector(f"unit summand {u!r} is not in sector {(j, j)}", u)
    fusion = list(fusion)
    for a, b, c, m in fusion:
        if not m:
            continue
        (i, j), (j2, k), (x, y) = sector[a], sector[b], sector[c]
        if j != j2 or (x, y) != (i, k):
            raise InvalidSector(f"fusion entry {(a, b, c)} crosses sectors", (a, b, c))
    out = BicategoryData(
        base,
        [SimpleArrow(s.id, arrow(*sector[s.id]), s.dim, s.dual) for s in simples],
        {str(j): u for j, u in units.items()},
        fusion,
        tet_plus,
        tet_minus,
    )
    return _require_valid(out) if check else out


def matrix_units(n: int = 2) -> Biparcel:
    """The n x n matrix-unit toy: simples e_ij (all dim 1), e_ij e_jk = e_ik, trivial amplitudes."""
    idx = range(1, n + 1)
    names = {(i, j): f"e{i}{j}" for i in idx for j in idx}
    simples = [SimpleArrow(names[ij], "", 1 + 0j, names[(ij[1], ij[0])]) for ij in sorted(names)]
    fusion = [(names[(i, j)], names[(j, k)], names[(i, k)], 1) for i in idx for j in idx for k in idx]
    table = {}
    for a, b, c, d in itertools.product(idx, repeat=4):
        e = names
        table[(e[(a, b)], e[(b, c)], e[(c, d)], e[(a, d)], e[(a, c)], e[(b, d)], 0, 0, 0, 0)] = 1 + 0j
    return multifusion_sectors(
        simples, {v: k for k, v in names.items()}, {i: names[(i, i)] for i in idx}, fusion, table, dict(table)
    )


# comparison helpers


def fiber(b: Biparcel, gamma_arrow: str, strip: bool = True) -> dict[str, complex]:
    """Simples over one base arrow with their dimensions; ``strip`` drops pullback/sharp tags."""
    out = {}
    for s in b.over(gamma_arrow):
        key = s.rsplit("@", 1)[0] if strip and "@" in s else s
        out[key] = b.dim(s)
    return out


def relabel(b: Biparcel, simple_map: Mapping[str, str], base: FiniteCategory, arrow_map: Mapping[str, str],
            object_map: Mapping[str, str]) -> Biparcel:
    """Rename simples and move them onto another (isomorphic) base, for table comparisons."""
    simples = [
        SimpleArrow(simple_map[s.id], arrow_map[s.gamma_arrow], s.dim,
                    None if s.dual is None else simple_map[s.dual])
        for s in b.simples.values()
    ]
    fusion = [(simple_map[a], simple_map[c1], simple_map[c], m)
              for (a, c1), row in b.fusion.items() for c, m in row.items()]

    def tab(t):
        return {tuple(simple_map[s] for s in k[:6]) + k[6:]: v for k, v in t.items()}

    return Biparcel.build(
        base, simples, {object_map[x]: simple_map[u] for x, u in b.identity_simples.items()},
        fusion, tab(b.tet_plus), tab(b.tet_minus), require_gaunt=b.require_gaunt,
    )


def same_tables(a: Biparcel, b: Biparcel, tolerance: float = 1e-12) -> bool:
    """Equal simples, fusion and amplitudes (base compared by arrows and identities)."""
    if dict(a.base.arrows) != dict(b.base.arrows) or dict(a.identity_simples) != dict(b.identity_simples):
        return False
    if {k: (v.gamma_arrow, v.dual) for k, v in a.simples.items()} != {k: (v.gamma_arrow, v.dual) for k, v in b.simples.items()}:
        return False
    if any(abs(a.dim(s) - b.dim(s)) > tolerance for s in a.simples):
        return False
    if {k: dict(v) for k, v in a.fusion.items()} != {k: dict(v) for k, v in b.fusion.items()}:
        return False
    for ta, tb in ((a.tet_plus, b.tet_plus), (a.tet_minus, b.tet_minus)):
        if set(ta) != set(tb) or any(abs(ta[k] - tb[k]) > tolerance for k in ta):
            return False
    return True
