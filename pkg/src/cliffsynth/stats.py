"""Sampling and CZ-span statistics over CNOT synthesizers.

Draws random invertible linear layers, synthesizes each with a pluggable
CNOT synthesizer, completes the CZ span with insert_cz, and aggregates
per-size statistics: how often the span is already full, how much of it
is missing otherwise, and what the completion costs in gates and depth.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

from .a2a import cz_basis, insert_cz, gauss_synth, pmh_synth
from .circuit import Circuit, two_qubit_depth
from .gf2 import BitMatrix, random_invertible
from .verify import HadamardFreeTarget, hfree_canonical

SYNTHESIZERS: Dict[str, Callable[[BitMatrix], Circuit]] = {
    "pmh": pmh_synth,
    "gauss": gauss_synth,
}


def register_synthesizer(name: str, fn: Callable[[BitMatrix], Circuit]) -> None:
    """Plug a named CNOT synthesizer into the stats harness."""
    SYNTHESIZERS[name] = fn


def sample_hfree(n: int, seed: int) -> HadamardFreeTarget:
    """Uniform Hadamard-free target via its bijective parameterization.

    Fixed draw order from random.Random(seed): p uniform over Z4^n, gamma
    uniform over strictly-upper pair masks, m uniform over GL(n, 2).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    p = tuple(rng.randrange(4) for _ in range(n))
    gamma = rng.getrandbits(n * (n - 1) // 2)
    m = random_invertible(n, rng)
    return HadamardFreeTarget(n, p, gamma, m)


def sample_linear(n: int, seed: int) -> BitMatrix:
    """Uniform invertible linear layer over F2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return random_invertible(n, random.Random(seed))


@dataclass(frozen=True)
class StatsRow:
    """Aggregates for one circuit size."""

    n: int
    samples: int
    full_basis_fraction: float
    mean_missing_fraction: float
    depth_increase_fraction: float
    mean_depth_increase: float
    mean_gates_before: float
    mean_gates_after: float


@dataclass(frozen=True)
class StatsReport:
    """One row per n plus the run parameters; detail holds per-sample records."""

    synth: str
    seed: int
    rows: Tuple[StatsRow, ...]
    detail: Tuple[Dict[str, int], ...] = ()


_CSV_FIELDS = (
    "n",
    "samples",
    "full_basis_fraction",
    "mean_missing_fraction",
    "depth_increase_fraction",
    "mean_depth_increase",
    "mean_gates_before",
    "mean_gates_after",
)


def run_insertcz_stats(
    synth: str = "pmh",
    n_min: int = 2,
    n_max: int = 10,
    samples: int = 100,
    seed: int = 0,
    verify_all: bool = False,
    detail: bool = False,
) -> StatsReport:
    """CZ-span completion statistics for a registered synthesizer.

    The per-sample stream is random.Random(seed ^ index) so any single
    sample is reproducible in isolation.  Every tenth sample (all of them
    with verify_all) is checked against the canonical-form oracle: the
    synthesized circuit must realize its source matrix exactly and the
    insertion must preserve the linear part.  Full-span samples must see
    zero insertions and zero depth increase.
    """
    if synth not in SYNTHESIZERS:
        raise ValueError(f"unknown synthesizer name {synth!r}")
    if not 1 <= n_min <= n_max:
        raise ValueError("need 1 <= n_min <= n_max")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    fn = SYNTHESIZERS[synth]
    rows: List[StatsRow] = []
    records: List[Dict[str, int]] = []
    for n in range(n_min, n_max + 1):
        npairs = n * (n - 1) // 2
        full = 0
        missing_sum = 0.0
        dinc_count = 0
        dinc_sum = 0
        before_sum = 0
        after_sum = 0
        for idx in range(samples):
            m = random_invertible(n, random.Random(seed ^ idx))
            c = fn(m)
            cc = insert_cz(c)
            missing = len(cz_basis(c).complement)
            inserted = len(cc.gates) - len(c.gates)
            assert inserted == missing, "insertions != complement dimension"
            d0 = two_qubit_depth(c)
            d1 = two_qubit_depth(cc)
            if missing == 0:
                full += 1
                assert d1 == d0, "full-span sample grew in depth"
            if verify_all or idx % 10 == 0:
                plain = HadamardFreeTarget(n, (0,) * n, 0, m)
                assert hfree_canonical(c) == plain, "synthesized circuit wrong"
                assert hfree_canonical(cc).m == m, "insertion broke the linear part"
            missing_sum += missing / npairs if npairs else 0.0
            if d1 > d0:
                dinc_count += 1
            dinc_sum += d1 - d0
            before_sum += len(c.gates)
            after_sum += len(cc.gates)
            if detail:
                records.append(
                    {
                        "n": n,
                        "index": idx,
                        "missing": missing,
                        "inserted": inserted,
                        "depth_before": d0,
                        "depth_after": d1,
                        "gates_before": len(c.gates),
                        "gates_after": len(cc.gates),
                    }
                )
        rows.append(
            StatsRow(
                n=n,
                samples=samples,
                full_basis_fraction=full / samples,
                mean_missing_fraction=missing_sum / samples,
                depth_increase_fraction=dinc_count / samples,
                mean_depth_increase=dinc_sum / samples,
                mean_gates_before=before_sum / samples,
                mean_gates_after=after_sum / samples,
            )
        )
    return StatsReport(synth, seed, tuple(rows), tuple(records))


def report_csv(report: StatsReport) -> str:
    """One header line plus one row per n; floats pinned to 6 decimals."""
    lines = [",".join(_CSV_FIELDS)]
    for r in report.rows:
        vals = [str(r.n), str(r.samples)]
        vals += ["{:.6f}".format(getattr(r, f)) for f in _CSV_FIELDS[2:]]
        lines.append(",".join(vals))
    return "\n".join(lines) + "\n"


def report_json(report: StatsReport) -> str:
    """Same values as the CSV, keyed, plus per-sample detail when present."""
    obj = {
        "synth": report.synth,
        "seed": report.seed,
        "rows": [
            {
                "n": r.n,
                "samples": r.samples,
                **{f: float("{:.6f}".format(getattr(r, f))) for f in _CSV_FIELDS[2:]},
            }
            for r in report.rows
        ],
    }
    if report.detail:
        obj["detail"] = list(report.detail)
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


__all__ = [
    "SYNTHESIZERS",
    "register_synthesizer",
    "sample_hfree",
    "sample_linear",
    "StatsRow",
    "StatsReport",
    "run_insertcz_stats",
    "report_csv",
    "report_json",
]
