"""Command-line surface: synthesize, verify, sample, and gather statistics.

File formats (JSON):
  Hadamard-free target: {"n": int, "p": [k_1..k_n in Z4],
    "gamma": [[i, j], ...] with 1-based i < j, "m": n row bitstrings,
    optional "d": row bitstring}.  Row bitstrings read left to right as
    columns 1..n; "p", "gamma" and "d" may be omitted (linear-only files).
  Clifford tableau: {"symplectic": 2n row bitstrings of length 2n (X and
    Z block columns side by side, X images first), "signs": 2n bits}.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .a2a import insert_cz, pmh_synth, schedule_phases_a2a
from .circuit import Circuit, two_qubit_depth
from .gf2 import BitMatrix
from .lnn import _synth_clifford_tiered, assemble_hfree_lnn
from .qasm import emit_text, parse_text
from .stats import report_csv, report_json, run_insertcz_stats, sample_hfree, sample_linear
from .verify import (
    CliffordTableau,
    HadamardFreeTarget,
    hfree_canonical,
    pair_mask,
    tableau_from_hfree,
    tableau_of,
)


def target_to_json(t: HadamardFreeTarget) -> Dict[str, Any]:
    obj: Dict[str, Any] = {
        "n": t.n,
        "p": list(t.p),
        "gamma": [list(pr) for pr in t.gamma_pairs()],
        "m": t.m.to_strings(),
    }
    if t.d:
        obj["d"] = "".join("1" if (t.d >> w) & 1 else "0" for w in range(t.n))
    return obj


def target_from_json(obj: Dict[str, Any]) -> HadamardFreeTarget:
    n = int(obj["n"])
    p = tuple(int(v) for v in obj.get("p", [0] * n))
    gamma = pair_mask(n, [tuple(pr) for pr in obj.get("gamma", [])])
    m = BitMatrix.from_strings(obj["m"])
    dstr = obj.get("d", "0" * n)
    if len(dstr) != n:
        raise ValueError("d bitstring has wrong length")
    d = sum(1 << w for w, ch in enumerate(dstr) if ch == "1")
    return HadamardFreeTarget(n, p, gamma, m, d)


def tableau_to_json(tab: CliffordTableau) -> Dict[str, Any]:
    rows = ["".join(str(int(v)) for v in tab.sym[r]) for r in range(2 * tab.n)]
    return {"symplectic": rows, "signs": tab.signs()}


def tableau_from_json(obj: Dict[str, Any]) -> CliffordTableau:
    rows = obj["symplectic"]
    signs = obj["signs"]
    if len(rows) % 2 or not rows:
        raise ValueError("symplectic block must have 2n rows")
    n = len(rows) // 2
    if any(len(r) != 2 * n for r in rows) or len(signs) != 2 * n:
        raise ValueError("tableau fields must all have size 2n")
    sym = np.array([[1 if ch == "1" else 0 for ch in r] for r in rows], dtype=np.uint8)
    ab = (sym[:, :n] & sym[:, n:]).sum(axis=1).astype(np.int64)
    t = (ab + 2 * np.array([int(s) for s in signs], dtype=np.int64)) % 4
    return CliffordTableau(n, sym, t)


def _load(path: str) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _store(path: Optional[str], text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_synth(args: argparse.Namespace) -> int:
    obj = _load(args.input)
    if args.mode == "lnn-clifford":
        tab = tableau_from_json(obj)
        c, tier = _synth_clifford_tiered(tab)
        bound = 7 * tab.n - 4 if tier == "primary" else 8 * tab.n - 4
        print(f"depth={two_qubit_depth(c)} bound={bound} tier={tier}")
    else:
        target = target_from_json(obj)
        if args.mode == "lnn-hfree":
            c = assemble_hfree_lnn(target)
            print(f"depth={two_qubit_depth(c)} bound={5 * target.n}")
        else:
            c = schedule_phases_a2a(target, insert_cz(pmh_synth(target.m)))
            print(f"depth={two_qubit_depth(c)} gates={len(c.gates)}")
    if args.out:
        _store(args.out, emit_text(c))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    with open(args.circuit, "r", encoding="utf-8") as fh:
        c = parse_text(fh.read())
    obj = _load(args.target)
    if "symplectic" in obj:
        want = tableau_from_json(obj)
    elif "m" in obj:
        want = tableau_from_hfree(target_from_json(obj))
    else:
        raise ValueError("target file is neither a tableau nor a target")
    if tableau_of(c) == want:
        print("equivalent")
        return 0
    print("NOT equivalent")
    return 1


def _cmd_stats(args: argparse.Namespace) -> int:
    rep = run_insertcz_stats(
        synth=args.synth,
        n_min=args.n_min,
        n_max=args.n_max,
        samples=args.samples,
        seed=args.seed,
        verify_all=args.verify_all,
        detail=args.detail,
    )
    wrote = False
    if args.csv:
        _store(args.csv, report_csv(rep))
        wrote = True
    if args.json_out:
        _store(args.json_out, report_json(rep))
        wrote = True
    if not wrote:
        sys.stdout.write(report_csv(rep))
    return 0


def _cmd_sample(args: argparse.Namespace) -> int:
    if args.kind == "hfree":
        obj = target_to_json(sample_hfree(args.n, args.seed))
    else:
        m = sample_linear(args.n, args.seed)
        obj = {"n": args.n, "m": m.to_strings()}
    _store(args.out, json.dumps(obj, indent=2) + "\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cliffsynth",
        description="Depth-aware Clifford and CNOT+phase circuit synthesis.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    syn = sub.add_parser("synth", help="synthesize a circuit from a target file")
    syn.add_argument("mode", choices=["lnn-hfree", "lnn-clifford", "a2a-hfree"])
    syn.add_argument("--input", required=True, help="target or tableau JSON file")
    syn.add_argument("--out", help="write the circuit as QASM to this file")
    syn.set_defaults(fn=_cmd_synth)

    ver = sub.add_parser("verify", help="check a circuit against a target file")
    ver.add_argument("--circuit", required=True, help="QASM circuit file")
    ver.add_argument("--target", required=True, help="target or tableau JSON file")
    ver.set_defaults(fn=_cmd_verify)

    st = sub.add_parser("stats", help="CZ-span statistics over random linear layers")
    st.add_argument("kind", choices=["insertcz"])
    st.add_argument("--synth", default="pmh", help="registered synthesizer name")
    st.add_argument("--n-min", type=int, default=2)
    st.add_argument("--n-max", type=int, default=10)
    st.add_argument("--samples", type=int, default=100)
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--csv", help="write the CSV report to this file")
    st.add_argument("--json", dest="json_out", help="write the JSON report to this file")
    st.add_argument("--verify-all", action="store_true", help="oracle-check every sample")
    st.add_argument("--detail", action="store_true", help="include per-sample records")
    st.set_defaults(fn=_cmd_stats)

    sa = sub.add_parser("sample", help="draw a reproducible random target")
    sa.add_argument("kind", choices=["hfree", "linear"])
    sa.add_argument("--n", type=int, required=True)
    sa.add_argument("--seed", type=int, required=True)
    sa.add_argument("--out", help="write the JSON to this file")
    sa.set_defaults(fn=_cmd_sample)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


__all__ = [
    "main",
    "target_to_json",
    "target_from_json",
    "tableau_to_json",
    "tableau_from_json",
]
