"""Validated coloring data for a biparcel of fusion type.

A :class:`Biparcel` lives over a small base category. It stores the simple
1-arrows with their scalar dimensions and optional duals, the fusion
multiplicities, and the two tetrahedron amplitude tables of the state sum.

Tetrahedron keys follow the vertex convention 0 < 1 < 2 < 3::

    (l01, l12, l23, l03, l02, l13, t012, t123, t013, t023)

where ``lXY`` are edge colors and ``tXYZ`` index a basis of the triangle
hom-space ``(lXY lYZ -> lXZ)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Mapping

from .config import default_tolerance
from .errors import InadmissibleColoring, InvalidArgument
from .gaunt import FiniteCategory
from .report import Report

TetKey = tuple[str, str, str, str, str, str, int, int, int, int]

PLUS = 1
MINUS = -1


@dataclass(frozen=True)
class SimpleArrow:
    id: str
    gamma_arrow: str
    dim: complex
    dual: str | None = None


@dataclass(frozen=True)
class Biparcel:
    base: FiniteCategory
    simples: Mapping[str, SimpleArrow]
    identity_simples: Mapping[str, str]
    fusion: Mapping[tuple[str, str], Mapping[str, int]]
    tet_plus: Mapping[TetKey, complex]
    tet_minus: Mapping[TetKey, complex]
    require_gaunt: bool = True

    @classmethod
    def build(
        cls,
        base: FiniteCategory,
        simples: Iterable[SimpleArrow],
        identity_simples: Mapping[str, str],
        fusion: Iterable[tuple[str, str, str, int]],
        tet_plus: Mapping[TetKey, complex],
        tet_minus: Mapping[TetKey, complex],
        **kw: Any,
    ) -> "Biparcel":
        simples = sorted(simples, key=lambda s: s.id)
        simple_map = {s.id: s for s in simples}
        if len(simple_map) != len(simples):
            raise InvalidArgument("duplicate simple ids")
        fus: dict[tuple[str, str], dict[str, int]] = {}
        for a, b, c, m in fusion:
            if m < 0:
                raise InvalidArgument(f"negative multiplicity for {(a, b, c)}")
            if m:
                row = fus.setdefault((a, b), {})
                row[c] = row.get(c, 0) + int(m)
        fus = {k: dict(sorted(v.items())) for k, v in sorted(fus.items())}
        plus = {tuple(k): complex(v) for k, v in sorted(tet_plus.items()) if v != 0}
        minus = {tuple(k): complex(v) for k, v in sorted(tet_minus.items()) if v != 0}
        return cls(base, simple_map, dict(identity_simples), fus, plus, minus, **kw)

    # lookups

    @cached_property
    def by_arrow(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {a: [] for a in self.base.arrows}
        for s in self.simples.values():
            out.setdefault(s.gamma_arrow, []).append(s.id)
        return {a: tuple(sorted(v)) for a, v in out.items()}

    def over(self, gamma_arrow: str) -> tuple[str, ...]:
        return self.by_arrow.get(gamma_arrow, ())

    def dim(self, s: str) -> complex:
        return self.simples[s].dim

    def N(self, a: str, b: str, c: str) -> int:
        return self.fusion.get((a, b), {}).get(c, 0)

    def is_multiplicity_free(self) -> bool:
        return all(m <= 1 for row in self.fusion.values() for m in row.values())

    @cached_property
    def constants(self) -> dict[str, complex]:
        return {
            x: sum((self.dim(s) ** 2 for s in self.over(self.base.identities[x])), 0j)
            for x in self.base.objects
        }

    def admissible(self, key: TetKey) -> bool:
        i, j, k, l, m, n, t012, t123, t013, t023 = key
        return (
            0 <= t012 < self.N(i, j, m)
            and 0 <= t123 < self.N(j, k, n)
            and 0 <= t013 < self.N(i, n, l)
            and 0 <= t023 < self.N(m, k, l)
        )

    def table(self, sign: int) -> Mapping[TetKey, complex]:
        return self.tet_plus if sign > 0 else self.tet_minus

    def with_tables(self, tet_plus: Mapping[TetKey, complex], tet_minus: Mapping[TetKey, complex]) -> "Biparcel":
        return type(self)(
            self.base, self.simples, self.identity_simples, self.fusion,
            dict(tet_plus), dict(tet_minus), self.require_gaunt,
        )

    # serialization

    def to_json(self) -> dict:
        def tet_rows(t: Mapping[TetKey, complex]) -> list[dict]:
            names = ("i", "j", "k", "l", "m", "n", "t012", "t123", "t013", "t023")
            return [dict(zip(names, k), re=v.real, im=v.imag) for k, v in sorted(t.items())]

        return {
            "kind": "biparcel" if self.require_gaunt else "bicategory",
            "base": self.base.to_json(),
            "simples": [
                {"id": s.id, "over": s.gamma_arrow, "dim_re": s.dim.real, "dim_im": s.dim.imag, "dual": s.dual}
                for s in self.simples.values()
            ],
            "identity_simples": dict(sorted(self.identity_simples.items())),
            "fusion": [
                {"a": a, "b": b, "c": c, "mult": m}
                for (a, b), row in sorted(self.fusion.items())
                for c, m in row.items()
            ],
            "tet_plus": tet_rows(self.tet_plus),
            "tet_minus": tet_rows(self.tet_minus),
        }

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> "Biparcel":
        try:
            base = FiniteCategory.from_json(d["base"])
            simples = [
                SimpleArrow(str(s["id"]), str(s["over"]), complex(s["dim_re"], s.get("dim_im", 0.0)),
                            None if s.get("dual") is None else str(s["dual"]))
                for s in d["simples"]
            ]
            fusion = [(str(f["a"]), str(f["b"]), str(f["c"]), int(f["mult"])) for f in d.get("fusion", [])]

            def rows(key: str) -> dict[TetKey, complex]:
                out = {}
                for r in d.get(key, []):
                    k = (str(r["i"]), str(r["j"]), str(r["k"]), str(r["l"]), str(r["m"]), str(r["n"]),
                         int(r.get("t012", 0)), int(r.get("t123", 0)), int(r.get("t013", 0)), int(r.get("t023", 0)))
                    out[k] = complex(r["re"], r.get("im", 0.0))
                return out

            kind = d.get("kind", "biparcel")
            return cls.build(
                base, simples, {str(k): str(v) for k, v in d["identity_simples"].items()},
                fusion, rows("tet_plus"), rows("tet_minus"),
                require_gaunt=(kind != "bicategory"),
            )
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InvalidArgument(f"malformed category data: {exc}") from exc


def BicategoryData(*args: Any, **kw: Any) -> Biparcel:
    """A :class:`Biparcel` whose base need not be gaunt (groupoids, chaotic preorders)."""
    kw["require_gaunt"] = False
    return Biparcel.build(*args, **kw)


def _close(a: complex, b: complex, tol: float) -> bool:
    return abs(a - b) <= tol


def validate(b: Biparcel, tolerance: float | None = None) -> Report:
    """Run every local consistency check; never raises on bad data."""
    tol = default_tolerance() if tolerance is None else tolerance
    rep = Report()
    base = b.base
    rep.record("base-category", base.problems())
    if b.require_gaunt:
        v = base.gaunt_violation()
        rep.record("gaunt-base", [v] if v else [])

    rep.record("simples-over-base", [s.id for s in b.simples.values() if s.gamma_arrow not in base.arrows])
    if not rep.ok:
        return rep

    bad_id = []
    for x in base.objects:
        sid = b.identity_simples.get(x)
        s = b.simples.get(sid) if sid is not None else None
        if s is None or s.gamma_arrow != base.identities[x] or not _close(s.dim, 1, tol) or s.dual != s.id:
            bad_id.append(x)
    rep.record("identity-simples", bad_id)
    rep.record("nonzero-dims", [s.id for s in b.simples.values() if abs(s.dim) <= tol])
    rep.record(
        "constants",
        [x for x in base.objects if not b.over(base.identities[x]) or abs(b.constants[x]) <= tol],
    )

    domain_bad = []
    for (a, c1), row in b.fusion.items():
        if a not in b.simples or c1 not in b.simples:
            domain_bad.append((a, c1))
            continue
        comp = base.try_compose(b.simples[a].gamma_arrow, b.simples[c1].gamma_arrow)
        for c in row:
            if comp is None or c not in b.simples or b.simples[c].gamma_arrow != comp:
                domain_bad.append((a, c1, c))
    rep.record("fusion-domain", domain_bad)
    if bad_id:
        return rep

    unit_bad = []
    for s in b.simples.values():
        x, y = base.arrows[s.gamma_arrow]
        if dict(b.fusion.get((b.identity_simples[x], s.id), {})) != {s.id: 1}:
            unit_bad.append((b.identity_simples[x], s.id))
        if dict(b.fusion.get((s.id, b.identity_simples[y]), {})) != {s.id: 1}:
            unit_bad.append((s.id, b.identity_simples[y]))
    rep.record("unit-law", unit_bad)

    complete_bad = []
    for a in b.simples.values():
        for c1 in b.simples.values():
            if base.try_compose(a.gamma_arrow, c1.gamma_arrow) is None:
                continue
            total = sum((m * b.dim(c) for c, m in b.fusion.get((a.id, c1.id), {}).items()), 0j)
            if not _close(total, a.dim * c1.dim, tol):
                complete_bad.append((a.id, c1.id))
    rep.record("completeness", complete_bad, "sum_c N(a,b,c) dim(c) == dim(a) dim(b)")

    dual_bad, rev_bad, ddim_bad, pair_bad = [], [], [], []
    for s in b.simples.values():
        if s.dual is None:
            continue
        d = b.simples.get(s.dual)
        if d is None or d.dual != s.id:
            dual_bad.append(s.id)
            continue
        x, y = base.arrows[s.gamma_arrow]
        if base.arrows[d.gamma_arrow] != (y, x):
            rev_bad.append(s.id)
            continue
        if not _close(d.dim, s.dim, tol):
            ddim_bad.append(s.id)
        if b.N(s.id, d.id, b.identity_simples[x]) != 1:
            pair_bad.append(s.id)
    rep.record("dual-involution", dual_bad)
    rep.record("dual-reversed-arrow", rev_bad)
    rep.record("dual-dim", ddim_bad)
    rep.record("duality-pairing", pair_bad)

    tet_bad = [(+1, k) for k in b.tet_plus if not b.admissible(k)]
    tet_bad += [(-1, k) for k in b.tet_minus if not b.admissible(k)]
    rep.record("tet-admissibility", tet_bad)
    return rep


def global_constant(b: Biparcel, n: str) -> complex:
    """Sum of squared dimensions of the simple endo-1-arrows over ``id_n``."""
    if n not in b.base.identities:
        raise InvalidArgument(f"unknown object {n!r}")
    return b.constants[n]


def tet_amplitude(b: Biparcel, key: TetKey, sign: int) -> complex:
    key = tuple(key)
    if len(key) == 6:
        key = key + (0, 0, 0, 0)
    if not b.admissible(key):
        raise InadmissibleColoring(f"inadmissible tetrahedron coloring {key}", key)
    return b.table(sign).get(key, 0j)


def check_move_consistency(b: Biparcel, tolerance: float | None = None) -> Report:
    """Compare the two sides of the 2-3 and 1-4 moves for every boundary coloring."""
    from .statesum import local_move_report

    return local_move_report(b, default_tolerance() if tolerance is None else tolerance)
