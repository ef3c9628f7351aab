"""The ``tik`` entry point.

Subcommands: gen (random instances), reduce (run a registered
construction), decide (budgeted brute-force equivalence), witness-map /
witness-recover (transport witnesses along a reduction), verify (check
a witness against a pair), s2d (oracle-guided isometry or group-
isomorphism search), selftest (built-in battery).

Conventions shared by every subcommand:

* instance and witness documents are the text formats of
  :mod:`tik.cli.formats`;
* commands that produce a document write it to ``--out`` and print a
  one-line JSON summary on stdout, or print the document itself on
  stdout when ``--out`` is omitted;
* exit status 0 means success (equivalent / valid / found), 1 means a
  definite negative (non-equivalent, invalid witness, failed recovery,
  failed selftest), 2 means the command could not run (usage, parse,
  or budget errors);
* ``--budget`` caps brute-force work; the TIK_BUDGET environment
  variable supplies a default when the flag is absent.

Output is deterministic: the same invocation prints the same bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .. import oracle as O
from .. import reductions as R
from .. import tensor as T
from ..groupcorr import MatrixGroupGens, baer_alt
from ..matspace import BudgetExceeded, is_alternating, is_symmetric
from ..s2d import (
    brute_oracle,
    find_group_isomorphism,
    find_isometry,
    query_side_bound,
    structural_oracle,
)
from .formats import (
    ParseError,
    emit_instance,
    emit_witness,
    parse_instance,
    parse_witness,
)

PROBLEMS = {
    "3ti": T.TI3,
    "tid": T.TI_D,
    "equivalence": T.EQUIVALENCE,
    "isometry": T.ISOMETRY,
    "pseudo-isometry": T.PSEUDO_ISOMETRY,
    "conjugacy": T.CONJUGACY,
    "algebra": T.ALGEBRA_ISO,
    "trilinear": T.TRILINEAR_EQ,
    "form": T.FORM_EQ,
    "moncode": T.MONCODE_EQ,
    "graph": T.GRAPH_ISO,
}

_INSTANCE_TYPE = {
    T.TI3: T.Tensor3,
    T.TI_D: T.TensorD,
    T.EQUIVALENCE: T.Tensor3,
    T.ISOMETRY: T.Tensor3,
    T.PSEUDO_ISOMETRY: T.Tensor3,
    T.CONJUGACY: T.Tensor3,
    T.ALGEBRA_ISO: T.Tensor3,
    T.TRILINEAR_EQ: T.Tensor3,
    T.FORM_EQ: T.FormD,
    T.MONCODE_EQ: T.Code,
    T.GRAPH_ISO: T.Graph,
}


def header_for(tag: str, obj) -> str:
    """Document header used to serialize an instance of the given problem."""
    if tag in (T.TI3, T.TRILINEAR_EQ):
        return "tensor3"
    if tag == T.TI_D:
        return "tensord"
    if tag in (T.EQUIVALENCE, T.CONJUGACY):
        # rectangular spaces fall back to the general tensor grammar
        return "matspace" if obj.dims[0] == obj.dims[1] else "tensor3"
    if tag in (T.ISOMETRY, T.PSEUDO_ISOMETRY):
        slices = np.moveaxis(obj.data, 2, 0)
        if is_alternating(slices, obj.p):
            return "altspace"
        if is_symmetric(slices, obj.p):
            return "symspace"
        return "matspace"
    if tag == T.ALGEBRA_ISO:
        return "algebra"
    if tag == T.FORM_EQ:
        return "formd"
    if tag == T.MONCODE_EQ:
        return "code"
    if tag == T.GRAPH_ISO:
        return "graph"
    raise ValueError(f"no document format for problem tag {tag!r}")


def _shape_of(obj):
    return tuple(int(x) for x in T.instance_dims(obj))


def _emit(args, text: str, summary: dict) -> int:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(json.dumps({**summary, "out": out}, sort_keys=True))
    else:
        sys.stdout.write(text)
    return 0


def _load_instance(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _load_witness(path: str) -> T.Witness:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_witness(fh.read())


def _budget(args):
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get("TIK_BUDGET")
    if env is None:
        return None
    try:
        return int(env)
    except ValueError:
        raise ValueError(f"TIK_BUDGET is not an integer: {env!r}") from None


def _reduction_params(args, red: R.Reduction) -> dict:
    params = {}
    for item in args.param or []:
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"--param takes key=value, got {item!r}")
        if key not in red.params:
            accepted = ", ".join(red.params) if red.params else "none"
            raise ValueError(
                f"reduction {red.name!r} does not take parameter {key!r}"
                f" (accepted: {accepted})"
            )
        try:
            params[key] = int(value)
        except ValueError:
            raise ValueError(
                f"parameter {key!r} must be an integer, got {value!r}"
            ) from None
    return params


def _checked_pair(args, tag: str):
    head_a, A = _load_instance(args.a)
    head_b, B = _load_instance(args.b)
    want = _INSTANCE_TYPE[tag]
    for path, head, obj in ((args.a, head_a, A), (args.b, head_b, B)):
        if not isinstance(obj, want):
            raise ValueError(
                f"{path} holds a {head!r} document, which is not an instance"
                f" of problem {tag!r}"
            )
    return A, B


# --- subcommands -----------------------------------------------------------

def _cmd_gen(args) -> int:
    tag = PROBLEMS[args.problem]
    dims = tuple(int(x) for x in args.dims.split(","))
    inst = O.gen_instance(tag, dims, args.p, seed=args.seed, kind=args.kind)
    head = header_for(tag, inst)
    summary = {
        "dims": list(_shape_of(inst)),
        "format": head,
        "p": args.p,
        "problem": args.problem,
        "seed": args.seed,
    }
    return _emit(args, emit_instance(head, inst), summary)


def _cmd_reduce(args) -> int:
    red = R.get(args.reduction)
    params = _reduction_params(args, red)
    head_in, A = _load_instance(args.infile)
    if not isinstance(A, _INSTANCE_TYPE[red.source]):
        raise ValueError(
            f"{args.infile} holds a {head_in!r} document; reduction"
            f" {red.name!r} expects a {red.source!r} instance"
        )
    tA = red.construct(A, **params)
    head_out = header_for(red.target, tA)
    summary = {
        "dims": list(_shape_of(tA)),
        "format": head_out,
        "reduction": red.name,
        "source_dims": list(_shape_of(A)),
        "target_problem": red.target,
    }
    return _emit(args, emit_instance(head_out, tA), summary)


def _cmd_decide(args) -> int:
    tag = PROBLEMS[args.problem]
    A, B = _checked_pair(args, tag)
    w = O.decider_for(tag)(A, B, budget=_budget(args))
    if w is None:
        print(json.dumps({"equivalent": False, "problem": args.problem},
                         sort_keys=True))
        return 1
    if args.witness_out:
        with open(args.witness_out, "w", encoding="utf-8") as fh:
            fh.write(emit_witness(w))
    summary = {"equivalent": True, "problem": args.problem}
    if args.witness_out:
        summary["witness_out"] = args.witness_out
    print(json.dumps(summary, sort_keys=True))
    return 0


def _cmd_witness_map(args) -> int:
    red = R.get(args.reduction)
    params = _reduction_params(args, red)
    _, A = _load_instance(args.infile)
    w = _load_witness(args.witness)
    if w.tag != red.source:
        raise ValueError(
            f"witness is for {w.tag!r}; reduction {red.name!r} maps"
            f" {red.source!r} witnesses"
        )
    fw = red.witness_forward(A, w, **params)
    return _emit(args, emit_witness(fw),
                 {"reduction": red.name, "tag": fw.tag})


def _cmd_witness_recover(args) -> int:
    red = R.get(args.reduction)
    params = _reduction_params(args, red)
    _, A = _load_instance(args.a)
    _, B = _load_instance(args.b)
    fw = _load_witness(args.witness)
    if fw.tag != red.target:
        raise ValueError(
            f"witness is for {fw.tag!r}; reduction {red.name!r} recovers"
            f" from {red.target!r} witnesses"
        )
    try:
        back = red.witness_recover(A, B, fw, **params)
    except R.RecoveryError as e:
        print(json.dumps({"error": str(e), "kind": "recovery",
                          "recovered": False}, sort_keys=True))
        return 1
    return _emit(args, emit_witness(back),
                 {"recovered": True, "reduction": red.name, "tag": back.tag})


def _cmd_verify(args) -> int:
    _, A = _load_instance(args.a)
    _, B = _load_instance(args.b)
    w = _load_witness(args.witness)
    ok = O.verify_witness(A, B, w)
    print(json.dumps({"tag": w.tag, "valid": bool(ok)}, sort_keys=True))
    return 0 if ok else 1


def _cmd_s2d(args) -> int:
    head_a, A = _load_instance(args.a)
    head_b, B = _load_instance(args.b)
    base = {"structural": structural_oracle, "brute": brute_oracle}[args.oracle]
    budget = _budget(args)
    if budget is None:
        oracle = base
    else:
        def oracle(X, Y, i):
            return base(X, Y, i, budget=budget)
    stats: dict = {}

    if isinstance(A, MatrixGroupGens) and isinstance(B, MatrixGroupGens):
        iso = find_group_isomorphism(A, B, oracle=oracle, budget=budget,
                                     stats=stats)
        tup = baer_alt(A)
        n, _, m = tup.dims
        summary = {
            "lie_centre_dim": m,
            "lie_generator_dim": n,
            "mode": "group",
            "oracle": args.oracle,
        }
        if iso is None:
            print(json.dumps({**summary, "isomorphic": False}, sort_keys=True))
            return 1
        if args.witness_out:
            images = MatrixGroupGens(B.n, B.p, iso.images)
            with open(args.witness_out, "w", encoding="utf-8") as fh:
                fh.write(emit_instance("group", images))
            summary["witness_out"] = args.witness_out
        queries = stats.get("queries", [])
        summary.update({
            "isomorphic": True,
            "max_query_side": max((s for _, s in queries), default=0),
            "queries": len(queries),
            "side_bound": query_side_bound(n),
        })
        print(json.dumps(summary, sort_keys=True))
        return 0

    if isinstance(A, T.Tensor3) and isinstance(B, T.Tensor3):
        w = find_isometry(A, B, oracle=oracle, budget=budget, stats=stats)
        summary = {"mode": "isometry", "oracle": args.oracle}
        if w is None:
            print(json.dumps({**summary, "isometric": False}, sort_keys=True))
            return 1
        if args.witness_out:
            with open(args.witness_out, "w", encoding="utf-8") as fh:
                fh.write(emit_witness(w))
            summary["witness_out"] = args.witness_out
        queries = stats.get("queries", [])
        summary.update({
            "isometric": True,
            "max_query_side": max((s for _, s in queries), default=0),
            "queries": len(queries),
            "side_bound": query_side_bound(A.dims[0]),
        })
        print(json.dumps(summary, sort_keys=True))
        return 0

    raise ValueError(
        f"s2d takes two altspace documents or two group documents,"
        f" got {head_a!r} and {head_b!r}"
    )


def _cmd_selftest(args) -> int:
    from . import selftest

    checks = selftest.run(level=args.level)
    failed = [name for name, ok, _ in checks if not ok]
    for name, ok, detail in checks:
        line = f"{'ok' if ok else 'FAIL'} {name}"
        if detail and not ok:
            line += f" -- {detail}"
        print(line, file=sys.stderr)
    print(json.dumps({
        "checks": len(checks),
        "failed": len(failed),
        "failures": sorted(failed),
        "level": args.level,
    }, sort_keys=True))
    return 0 if not failed else 1


# --- parser ----------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tik",
        description="finite-field multi-way array equivalence toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def budget_flag(sp):
        sp.add_argument("--budget", type=int, default=None,
                        help="brute-force work cap (default: TIK_BUDGET env)")

    sp = sub.add_parser("gen", help="generate a random instance")
    sp.add_argument("--problem", required=True, choices=sorted(PROBLEMS))
    sp.add_argument("--dims", required=True,
                    help="comma-separated sizes, e.g. 2,3,2")
    sp.add_argument("--p", type=int, default=2, help="field size (prime)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--kind", default=None,
                    help="sampler variant (e.g. nondegenerate, alternating,"
                         " general, symmetric, alternating-any, independent)")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_gen)

    sp = sub.add_parser("reduce", help="apply a registered reduction")
    sp.add_argument("--reduction", required=True)
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--param", action="append", default=[],
                    help="key=value, repeatable (integers)")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_reduce)

    sp = sub.add_parser("decide", help="budgeted equivalence decision")
    sp.add_argument("--problem", required=True, choices=sorted(PROBLEMS))
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--witness-out", default=None)
    budget_flag(sp)
    sp.set_defaults(func=_cmd_decide)

    sp = sub.add_parser("witness-map",
                        help="push a source witness through a reduction")
    sp.add_argument("--reduction", required=True)
    sp.add_argument("--in", dest="infile", required=True,
                    help="source instance the witness acts on")
    sp.add_argument("--witness", required=True)
    sp.add_argument("--param", action="append", default=[])
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_witness_map)

    sp = sub.add_parser("witness-recover",
                        help="pull a target witness back through a reduction")
    sp.add_argument("--reduction", required=True)
    sp.add_argument("--a", required=True, help="source instance A")
    sp.add_argument("--b", required=True, help="source instance B")
    sp.add_argument("--witness", required=True, help="target-side witness")
    sp.add_argument("--param", action="append", default=[])
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_witness_recover)

    sp = sub.add_parser("verify", help="check a witness against a pair")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--witness", required=True)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("s2d",
                        help="oracle-guided isometry / group-isomorphism search")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--oracle", choices=("structural", "brute"),
                    default="structural")
    sp.add_argument("--witness-out", default=None)
    budget_flag(sp)
    sp.set_defaults(func=_cmd_s2d)

    sp = sub.add_parser("selftest", help="run the built-in battery")
    sp.add_argument("--level", choices=("quick", "full"), default="quick")
    sp.add_argument("--jobs", type=int, default=1,
                    help="reserved; the battery currently runs in-process")
    sp.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        return _json_error("parse", e)
    except BudgetExceeded as e:
        return _json_error("budget", e)
    except (ValueError, KeyError, TypeError) as e:
        return _json_error("usage", e)
    except OSError as e:
        return _json_error("io", e)
    except RuntimeError as e:
        return _json_error("error", e)


def _json_error(kind: str, err: Exception) -> int:
    message = str(err) or type(err).__name__
    print(json.dumps({"error": message, "kind": kind}, sort_keys=True))
    return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
