"""Small finite categories used as bases: posets, truncated path categories,
chaotic preorders, and groups viewed as one-object groupoids.

Composition is written in diagrammatic order: ``compose(f, g)`` is "f then g"
and is defined when ``tgt(f) == src(g)`` and the table has an entry.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .errors import InvalidArgument, InvalidFunctor, UndefinedComposite


@dataclass(frozen=True)
class FiniteCategory:
    objects: tuple[str, ...]
    arrows: Mapping[str, tuple[str, str]]
    identities: Mapping[str, str]
    table: Mapping[tuple[str, str], str]
    # user-asserted: the category embeds in the groupoid it freely generates
    embeds_in_free_groupoid: bool | None = None

    def src(self, f: str) -> str:
        return self.arrows[f][0]

    def tgt(self, f: str) -> str:
        return self.arrows[f][1]

    def identity(self, x: str) -> str:
        try:
            return self.identities[x]
        except KeyError:
            raise InvalidArgument(f"unknown object {x!r}") from None

    def try_compose(self, f: str, g: str) -> str | None:
        return self.table.get((f, g))

    def compose(self, f: str, g: str) -> str:
        fg = self.table.get((f, g))
        if fg is None:
            raise UndefinedComposite(f"composite of {f!r} and {g!r} is undefined", (f, g))
        return fg

    def hom(self, x: str, y: str) -> list[str]:
        return sorted(a for a, (s, t) in self.arrows.items() if s == x and t == y)

    def is_identity(self, f: str) -> bool:
        return self.identities.get(self.src(f)) == f

    def problems(self) -> list[tuple[str, Any]]:
        """Structural law violations as ``(check name, witness)`` pairs."""
        out: list[tuple[str, Any]] = []
        for x in self.objects:
            i = self.identities.get(x)
            if i is None or self.arrows.get(i) != (x, x):
                out.append(("identity-arrow", x))
        for (f, g), fg in sorted(self.table.items()):
            if f not in self.arrows or g not in self.arrows or fg not in self.arrows:
                out.append(("unknown-arrow", (f, g, fg)))
                continue
            if self.tgt(f) != self.src(g) or self.arrows[fg] != (self.src(f), self.tgt(g)):
                out.append(("composite-endpoints", (f, g, fg)))
        for f in sorted(self.arrows):
            s, t = self.arrows[f]
            if self.try_compose(self.identities.get(s, ""), f) != f:
                out.append(("left-identity", f))
            if self.try_compose(f, self.identities.get(t, "")) != f:
                out.append(("right-identity", f))
        for (f, g), fg in sorted(self.table.items()):
            for h in self.arrows:
                gh = self.table.get((g, h))
                if gh is None:
                    continue
                left = self.table.get((fg, h))
                right = self.table.get((f, gh))
                if left is not None and right is not None and left != right:
                    out.append(("associativity", (f, g, h)))
        return out

    def gaunt_violation(self) -> tuple[str, str] | None:
        """A non-identity arrow with a two-sided inverse, or None."""
        for f in sorted(self.arrows):
            if self.is_identity(f):
                continue
            s, t = self.arrows[f]
            for g in self.hom(t, s):
                if self.try_compose(f, g) == self.identities[s] and self.try_compose(g, f) == self.identities[t]:
                    return (f, g)
        return None

    def is_gaunt(self) -> bool:
        return self.gaunt_violation() is None

    def to_json(self) -> dict:
        d: dict[str, Any] = {
            "objects": list(self.objects),
            "arrows": [{"id": a, "src": s, "tgt": t} for a, (s, t) in sorted(self.arrows.items())],
            "identities": dict(sorted(self.identities.items())),
            "compose": [{"f": f, "g": g, "fg": fg} for (f, g), fg in sorted(self.table.items())],
        }
        if self.embeds_in_free_groupoid is not None:
            d["embeds_in_free_groupoid"] = self.embeds_in_free_groupoid
        return d

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> "FiniteCategory":
        try:
            cat = cls(
                objects=tuple(str(x) for x in d["objects"]),
                arrows={str(a["id"]): (str(a["src"]), str(a["tgt"])) for a in d["arrows"]},
                identities={str(k): str(v) for k, v in d["identities"].items()},
                table={(str(c["f"]), str(c["g"])): str(c["fg"]) for c in d["compose"]},
                embeds_in_free_groupoid=d.get("embeds_in_free_groupoid"),
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidArgument(f"malformed category: {exc}") from exc
        bad = cat.problems()
        if bad:
            raise InvalidArgument(f"category violates {bad[0][0]}", bad[0][1])
        return cat


# Name used for base categories; gauntness is checked by validators, not enforced by type.
GauntCategory = FiniteCategory


@dataclass(frozen=True)
class FiniteGroupoid(FiniteCategory):
    def inverse(self, f: str) -> str:
        s, t = self.arrows[f]
        for g in self.hom(t, s):
            if self.try_compose(f, g) == self.identities[s]:
                return g
        raise InvalidArgument(f"arrow {f!r} has no inverse")


def _chain_arrow(i: int, j: int) -> str:
    return f"id_{i}" if i == j else f"{i}->{j}"


def poset_chain(n: int) -> FiniteCategory:
    """The totally ordered set 1 < 2 < ... < n as a category."""
    if n < 1:
        raise InvalidArgument("poset_chain needs n >= 1")
    objs = tuple(str(i) for i in range(1, n + 1))
    arrows = {}
    table = {}
    for i, j in itertools.combinations_with_replacement(range(1, n + 1), 2):
        arrows[_chain_arrow(i, j)] = (str(i), str(j))
    for i, j, k in itertools.combinations_with_replacement(range(1, n + 1), 3):
        table[(_chain_arrow(i, j), _chain_arrow(j, k))] = _chain_arrow(i, k)
    ids = {str(i): _chain_arrow(i, i) for i in range(1, n + 1)}
    return FiniteCategory(objs, arrows, ids, table)


def terminal_category() -> FiniteCategory:
    return poset_chain(1)


def path_category(
    vertices: Sequence[str],
    edges: Mapping[str, tuple[str, str]],
    max_word_length: int,
) -> FiniteCategory:
    """Path category of a digraph, truncated to words of length <= max_word_length.

    Edge names must be single tokens; a word is the concatenation of its edge
    names (e.g. ``"ab"``), identities are ``"id_<vertex>"``. Composites whose
    length would exceed the bound are left undefined.
    """
    if max_word_length < 1:
        raise InvalidArgument("max_word_length must be >= 1")
    for e, (s, t) in edges.items():
        if s not in vertices or t not in vertices:
            raise InvalidArgument(f"edge {e!r} has an unknown endpoint")
    verts = tuple(str(v) for v in vertices)
    # words as tuples of edge names
    words: dict[tuple[str, ...], tuple[str, str]] = {}
    frontier = [((e,), st) for e, st in sorted(edges.items())]
    for _ in range(max_word_length):
        nxt = []
        for w, (s, t) in frontier:
            words[w] = (s, t)
            if len(w) < max_word_length:
                nxt.extend((w + (e,), (s, et)) for e, (es, et) in sorted(edges.items()) if es == t)
        frontier = nxt

    def name(w: tuple[str, ...]) -> str:
        return "".join(w)

    arrows = {f"id_{v}": (v, v) for v in verts}
    arrows.update({name(w): st for w, st in words.items()})
    if len(arrows) != len(verts) + len(words):
        raise InvalidArgument("edge names produce ambiguous words")
    table = {}
    for v in verts:
        table[(f"id_{v}", f"id_{v}")] = f"id_{v}"
    for w, (s, t) in words.items():
        table[(f"id_{s}", name(w))] = name(w)
        table[(name(w), f"id_{t}")] = name(w)
    for w1, (_, t1) in words.items():
        for w2, (s2, _) in words.items():
            if t1 == s2 and len(w1) + len(w2) <= max_word_length:
                table[(name(w1), name(w2))] = name(w1 + w2)
    return FiniteCategory(verts, arrows, {v: f"id_{v}" for v in verts}, table)


def chaotic_preorder(J: Iterable[Any]) -> FiniteGroupoid:
    """Exactly one arrow ``i->j`` for every ordered pair of elements of J."""
    objs = tuple(str(j) for j in J)
    if not objs:
        raise InvalidArgument("chaotic_preorder needs a non-empty set")
    if len(set(objs)) != len(objs):
        raise InvalidArgument("duplicate elements")
    arrows = {_pair_arrow(i, j): (i, j) for i in objs for j in objs}
    table = {
        (_pair_arrow(i, j), _pair_arrow(j, k)): _pair_arrow(i, k)
        for i in objs
        for j in objs
        for k in objs
    }
    return FiniteGroupoid(objs, arrows, {i: _pair_arrow(i, i) for i in objs}, table)


codiscrete_groupoid = chaotic_preorder


def _pair_arrow(i: str, j: str) -> str:
    return f"id_{i}" if i == j else f"{i}->{j}"


def cyclic_group_table(n: int) -> list[list[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def group_as_groupoid(
    table: Sequence[Sequence[int]],
    names: Sequence[str] | None = None,
    obj: str = "*",
) -> FiniteGroupoid:
    """One-object groupoid from a multiplication table ``table[g][h] = gh``.

    Raises InvalidArgument naming the first violated group axiom.
    """
    n = len(table)
    if n == 0 or any(len(row) != n for row in table):
        raise InvalidArgument("table must be square and non-empty", "shape")
    for g, row in enumerate(table):
        for h, gh in enumerate(row):
            if not (isinstance(gh, int) and 0 <= gh < n):
                raise InvalidArgument("table is not closed", ("closure", g, h))
    for g, h, k in itertools.product(range(n), repeat=3):
        if table[table[g][h]][k] != table[g][table[h][k]]:
            raise InvalidArgument(f"associativity fails at ({g}, {h}, {k})", ("associativity", g, h, k))
    units = [e for e in range(n) if all(table[e][g] == g and table[g][e] == g for g in range(n))]
    if not units:
        raise InvalidArgument("no identity element", ("identity",))
    e = units[0]
    for g in range(n):
        if not any(table[g][h] == e and table[h][g] == e for h in range(n)):
            raise InvalidArgument(f"element {g} has no inverse", ("inverse", g))
    names = [str(x) for x in (names or range(n))]
    if len(names) != n or len(set(names)) != n:
        raise InvalidArgument("element names must be distinct and match the table size")
    arrows = {names[g]: (obj, obj) for g in range(n)}
    comp = {(names[g], names[h]): names[table[g][h]] for g in range(n) for h in range(n)}
    return FiniteGroupoid((obj,), arrows, {obj: names[e]}, comp)


def group_elements(g: FiniteGroupoid) -> list[str]:
    """Elements of a one-object groupoid, identity first then sorted."""
    (obj,) = g.objects
    e = g.identities[obj]
    return [e] + sorted(a for a in g.arrows if a != e)


@dataclass(frozen=True)
class Functor:
    source: FiniteCategory
    target: FiniteCategory
    object_map: Mapping[str, str]
    arrow_map: Mapping[str, str]

    def __call__(self, f: str) -> str:
        return self.arrow_map[f]

    def problems(self) -> list[tuple[str, Any]]:
        out: list[tuple[str, Any]] = []
        for x in self.source.objects:
            y = self.object_map.get(x)
            if y not in self.target.identities:
                out.append(("object-map", x))
            elif self.arrow_map.get(self.source.identities[x]) != self.target.identities[y]:
                out.append(("identity", x))
        if out:
            return out
        for f, (s, t) in sorted(self.source.arrows.items()):
            img = self.arrow_map.get(f)
            if img not in self.target.arrows:
                out.append(("arrow-map", f))
            elif self.target.arrows[img] != (self.object_map[s], self.object_map[t]):
                out.append(("endpoints", f))
        if out:
            return out
        for (f, g), fg in sorted(self.source.table.items()):
            if self.target.try_compose(self.arrow_map[f], self.arrow_map[g]) != self.arrow_map[fg]:
                out.append(("composite", (f, g)))
        return out

    def check(self) -> "Functor":
        bad = self.problems()
        if bad:
            raise InvalidFunctor(f"functor fails {bad[0][0]} at {bad[0][1]!r}", bad[0])
        return self

    def to_json(self) -> dict:
        return {
            "object_map": dict(sorted(self.object_map.items())),
            "arrow_map": dict(sorted(self.arrow_map.items())),
        }


def identity_functor(c: FiniteCategory) -> Functor:
    return Functor(c, c, {x: x for x in c.objects}, {f: f for f in c.arrows})


def functor_to_group(
    gamma: FiniteCategory,
    group: FiniteGroupoid,
    generators: Mapping[str, str],
) -> Functor:
    """Extend an assignment on some arrows of ``gamma`` to a functor into ``group``.

    Identities go to the unit; every other arrow must either be assigned or
    be a composite of already-assigned arrows. Raises InvalidFunctor when the
    extension is inconsistent.
    """
    (obj,) = group.objects
    e = group.identities[obj]
    amap = {gamma.identities[x]: e for x in gamma.objects}
    amap.update(generators)
    changed = True
    while changed:
        changed = False
        for (f, g), fg in sorted(gamma.table.items()):
            if f in amap and g in amap and fg not in amap:
                amap[fg] = group.compose(amap[f], amap[g])
                changed = True
    missing = sorted(set(gamma.arrows) - set(amap))
    if missing:
        raise InvalidFunctor(f"no value for arrows {missing}", missing)
    return Functor(gamma, group, {x: obj for x in gamma.objects}, amap).check()
