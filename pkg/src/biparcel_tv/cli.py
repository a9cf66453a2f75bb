"""``biparcel-tv`` command line.

Exit codes: 0 success, 1 domain failure, 2 input error, 3 harness inapplicability.
"""

from __future__ import annotations

import argparse
import random
import re
import sys
from typing import Any, Callable, Sequence

from . import constructions as cons
from .biparcel import Biparcel, check_move_consistency, validate
from .complex import GENERATORS, DirectedTriangulation, barycentric_subdivide, direct, disjoint_union
from .config import Config, default_tolerance
from .errors import (
    BiparcelError,
    InapplicableSite,
    InvalidArgument,
    Unsupported,
    WouldBreakDirectability,
    WouldBreakFlaglikeness,
)
from .gaunt import (
    FiniteCategory,
    FiniteGroupoid,
    Functor,
    chaotic_preorder,
    functor_to_group,
    poset_chain,
    terminal_category,
)
from .io import dumps, load
from .moves import BULK_MOVES, MOVES, random_move
from .statesum import dw_oracle, invariance_check, invariant

OK, DOMAIN, INPUT, INAPPLICABLE = 0, 1, 2, 3

_INAPPLICABLE = (InapplicableSite, WouldBreakFlaglikeness, WouldBreakDirectability, Unsupported)


class _Exit(Exception):
    def __init__(self, code: int, payload: Any):
        self.code = code
        self.payload = payload


def _error_payload(exc: BiparcelError) -> dict:
    d = {"error": exc.code, "message": str(exc)}
    if exc.witness is not None:
        d["witness"] = exc.witness
    return d


# argument vocabularies


def parse_group(name: str) -> FiniteGroupoid:
    m = re.fullmatch(r"z(\d+)", name.lower())
    if not m or int(m.group(1)) < 1:
        raise InvalidArgument(f"unknown group {name!r} (use z1, z2, z3, ...)")
    return cons.cyclic_group(int(m.group(1)))


def parse_cocycle(text: str, group_name: str) -> cons.Cochain3:
    """``trivial``, ``nontrivial`` (p = 1), ``p=<k>``, or a cochain JSON file."""
    n = len(parse_group(group_name).arrows)
    if text == "trivial":
        return cons.trivial_cochain(parse_group(group_name))
    if text == "nontrivial":
        return cons.standard_cocycle(n, 1)
    m = re.fullmatch(r"p=(-?\d+)", text)
    if m:
        return cons.standard_cocycle(n, int(m.group(1)))
    return cons.Cochain3.from_json(load(text))


def parse_base(name: str) -> FiniteCategory:
    if name == "terminal":
        return terminal_category()
    m = re.fullmatch(r"chain(\d+)", name)
    if m:
        return poset_chain(int(m.group(1)))
    raise InvalidArgument(f"unknown base {name!r} (use terminal or chainN)")


def parse_groupoid(name: str) -> FiniteGroupoid:
    if name == "trivial":
        return cons.cyclic_group(1)
    m = re.fullmatch(r"chaotic(\d+)", name)
    if m:
        return chaotic_preorder(range(1, int(m.group(1)) + 1))
    return parse_group(name)


def fusion_by_name(name: str) -> Biparcel:
    if name == "trivial":
        return cons.trivial()
    if name == "fibonacci":
        return cons.fibonacci()
    m = re.fullmatch(r"vec-(z\d+)", name)
    if m:
        return cons.vec_group_fusion(cons.trivial_cochain(parse_group(m.group(1))))
    raise InvalidArgument(f"unknown fusion data {name!r} (use trivial, fibonacci, vec-zN)")


def _parse_assignments(text: str | None) -> dict[str, str]:
    out = {}
    for part in filter(None, (text or "").split(",")):
        if "=" not in part:
            raise InvalidArgument(f"bad assignment {part!r}; expected arrow=element")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def generate(name: str) -> DirectedTriangulation:
    """A generator by name; ``a+b`` is the disjoint union of two generators."""
    parts = name.split("+")
    if any(p not in GENERATORS for p in parts):
        raise InvalidArgument(f"unknown generator {name!r}; known: {sorted(GENERATORS)}")
    c = GENERATORS[parts[0]]()
    for p in parts[1:]:
        c = disjoint_union(c, GENERATORS[p]())
    return direct(c)


def _load_category(path: str) -> Biparcel:
    return Biparcel.from_json(load(path))


def _load_triangulation(path: str) -> DirectedTriangulation:
    return DirectedTriangulation.from_json(load(path))


# subcommands


def cmd_validate(args, cfg: Config) -> tuple[int, Any]:
    b = _load_category(args.category)
    rep = validate(b, cfg.tolerance)
    out: dict[str, Any] = {"validate": rep.to_json()}
    if rep.ok:
        mc = check_move_consistency(b, cfg.tolerance)
        out["move_consistency"] = mc.to_json()
        ok = mc.ok
    else:
        ok = False
    out["ok"] = ok
    return (OK if ok else DOMAIN), out


def _validated(b: Biparcel, cfg: Config) -> None:
    rep = validate(b, cfg.tolerance)
    if not rep.ok:
        raise _Exit(DOMAIN, {"error": "validation-failed", "report": rep.to_json()})


def cmd_invariant(args, cfg: Config) -> tuple[int, Any]:
    b = _load_category(args.category)
    t = _load_triangulation(args.triangulation)
    _validated(b, cfg)
    return OK, invariant(b, t, cfg.tolerance, cfg.threads).to_json()


def cmd_moves_check(args, cfg: Config) -> tuple[int, Any]:
    b = _load_category(args.category)
    t = _load_triangulation(args.triangulation)
    _validated(b, cfg)
    if args.sequence:
        seq: list = [m.strip() for m in args.sequence.split(",")]
        bad = [m for m in seq if m not in MOVES]
        if bad:
            raise InvalidArgument(f"unknown moves {bad}")
        trace = invariance_check(b, t, seq, cfg.tolerance)
    else:
        pool = MOVES if args.move_set == "all" else BULK_MOVES
        rng = random.Random(cfg.seed)
        seq = []
        cur = t
        for _ in range(args.moves):
            step = None
            for _attempt in range(args.retries):
                step = random_move(cur, rng, pool)
                if step is not None:
                    break
            if step is None:
                raise _Exit(INAPPLICABLE, {"error": "no-applicable-move", "after": len(seq)})
            move, site, cur = step
            seq.append((move, site))
        trace = invariance_check(b, t, seq, cfg.tolerance)
    out = trace.to_json()
    return (OK if trace.ok else DOMAIN), out


def cmd_generate(args, cfg: Config) -> tuple[int, Any]:
    return OK, generate(args.name).to_json()


def cmd_subdivide(args, cfg: Config) -> tuple[int, Any]:
    t = _load_triangulation(args.triangulation)
    return OK, direct(barycentric_subdivide(t.complex)).to_json()


def cmd_construct(args, cfg: Config) -> tuple[int, Any]:
    kind = args.kind
    if kind in ("trivial", "fibonacci"):
        b = fusion_by_name(kind)
    elif kind == "vec":
        b = cons.vec_group_fusion(parse_cocycle(args.cocycle, args.group))
    elif kind == "cochain":
        return OK, parse_cocycle(args.cocycle, args.group).to_json()
    elif kind == "pointed":
        G = parse_group(args.group)
        omega = parse_cocycle(args.cocycle, args.group)
        gamma = parse_base(args.base)
        gens = _parse_assignments(args.phi)
        if not gens:
            gens = {f"{i}->{i + 1}": cons.group_elements(G)[min(1, len(G.arrows) - 1)]
                    for i in range(1, len(gamma.objects))}
        b = cons.pointed_biparcel(G, omega, gamma, functor_to_group(gamma, G, gens))
    elif kind == "sharp":
        b = cons.sharp_construction(fusion_by_name(args.c), parse_groupoid(args.groupoid))
    elif kind == "defect":
        d = fusion_by_name(args.c)
        gamma = parse_base(args.base)
        (obj,) = d.base.objects
        ida = d.base.identities[obj]
        b = cons.pullback(d, Functor(gamma, d.base, {x: obj for x in gamma.objects}, {a: ida for a in gamma.arrows}))
    elif kind == "matrix-units":
        b = cons.matrix_units(args.size)
    else:  # argparse restricts choices
        raise InvalidArgument(f"unknown construction {kind!r}")
    return OK, b.to_json()


def cmd_oracle_dw(args, cfg: Config) -> tuple[int, Any]:
    omega = parse_cocycle(args.cocycle, args.group)
    t = _load_triangulation(args.triangulation)
    oracle = dw_oracle(omega.group, omega.values, t, cfg.tolerance)
    out: dict[str, Any] = {"oracle": oracle.to_json()}
    code = OK
    if not args.no_compare:
        ours = invariant(cons.vec_group_fusion(omega, check=False), t, cfg.tolerance, cfg.threads)
        out["invariant"] = ours.to_json()
        out["deviation"] = abs(ours.value - oracle.value)
        out["agree"] = out["deviation"] <= cfg.tolerance
        code = OK if out["agree"] else DOMAIN
    return code, out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=None,
                        help="absolute comparison tolerance (default 1e-9 or $BIPARCEL_TV_TOLERANCE)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write JSON here instead of stdout")

    p = argparse.ArgumentParser(prog="biparcel-tv", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="local checks and move consistency of a category file")
    s.add_argument("category")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("invariant", parents=[common], help="state sum of a triangulation")
    s.add_argument("category")
    s.add_argument("triangulation")
    s.set_defaults(func=cmd_invariant)

    s = sub.add_parser("moves-check", parents=[common], help="recompute the invariant along a move sequence")
    s.add_argument("category")
    s.add_argument("triangulation")
    s.add_argument("--moves", type=int, default=5, help="number of random moves")
    s.add_argument("--move-set", choices=("bulk", "all"), default="all")
    s.add_argument("--sequence", default=None, help="explicit comma-separated moves, e.g. 2-6,6-2")
    s.add_argument("--retries", type=int, default=10)
    s.set_defaults(func=cmd_moves_check)

    s = sub.add_parser("generate", parents=[common], help="emit an example triangulation")
    s.add_argument("name", help=f"one of {sorted(GENERATORS)}, or a+b for a disjoint union")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("construct", parents=[common], help="emit a category file")
    s.add_argument("kind", choices=("trivial", "fibonacci", "vec", "cochain", "pointed", "sharp", "defect",
                                    "matrix-units"))
    s.add_argument("--group", default="z2")
    s.add_argument("--cocycle", default="trivial", help="trivial, nontrivial, p=<k>, or a cochain file")
    s.add_argument("--base", default="chain2")
    s.add_argument("--phi", default=None, help="generator images, e.g. '1->2=1,2->3=0'")
    s.add_argument("--c", default="trivial", help="fusion data: trivial, fibonacci, vec-zN")
    s.add_argument("--groupoid", default="z2", help="zN, trivial, or chaoticN")
    s.add_argument("--size", type=int, default=2)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("oracle-dw", parents=[common], help="Dijkgraaf-Witten oracle on a single-stratum triangulation")
    s.add_argument("triangulation")
    s.add_argument("--group", default="z2")
    s.add_argument("--cocycle", default="trivial")
    s.add_argument("--no-compare", action="store_true", help="skip the comparison with the state sum")
    s.set_defaults(func=cmd_oracle_dw)

    s = sub.add_parser("subdivide", parents=[common], help="barycentric subdivision of a triangulation")
    s.add_argument("triangulation")
    s.set_defaults(func=cmd_subdivide)
    return p


def _emit(payload: Any, out: str | None) -> None:
    text = dumps(payload)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT if exc.code else OK
    try:
        cfg = Config(
            tolerance=default_tolerance() if args.tolerance is None else args.tolerance,
            threads=args.threads, seed=args.seed, output=args.out,
        )
        func: Callable = args.func
        code, payload = func(args, cfg)
    except _Exit as exc:
        code, payload = exc.code, exc.payload
    except InvalidArgument as exc:
        code, payload = INPUT, _error_payload(exc)
    except _INAPPLICABLE as exc:
        code, payload = INAPPLICABLE, _error_payload(exc)
    except BiparcelError as exc:
        code, payload = DOMAIN, _error_payload(exc)
    except ValueError as exc:  # Config invariants
        code, payload = INPUT, {"error": "invalid-argument", "message": str(exc)}
    _emit(payload, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
