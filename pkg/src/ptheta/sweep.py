"""Parameter sweeps with JSONL persistence, deduplication, and auditing.

Sweeps write one JSON record per line while running (append-friendly under
parallel production) and finish by rewriting the file sorted, so a fixed
configuration always yields a byte-identical output file.  The audit pass
recomputes every bound from the stored fields rather than trusting flags.
"""

from __future__ import annotations

import json
import math
import cmath
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import (
    DomainError,
    MULTIPLE_ZERO_BOUND,
    RecordParseError,
    as_q,
)
from .zeros import DoubleZeroRecord, deduplicate_double_zeros, solve_double_zero_batch
from .bounds import DiskCertificate, certify_disk_rouche, _c0

__all__ = [
    "RealInterval",
    "AnnulusSector",
    "SeedStrategy",
    "SweepConfig",
    "AuditSummary",
    "sweep_double_zeros",
    "sweep_certificates",
    "audit",
    "write_jsonl",
    "load_double_zero_records",
    "export_trend_csv",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RealInterval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (0.0 < self.lo <= self.hi < 1.0):
            raise DomainError("real q interval must sit inside (0, 1)")

    def grid(self, steps: int) -> np.ndarray:
        return np.linspace(self.lo, self.hi, steps).astype(complex)


@dataclass(frozen=True)
class AnnulusSector:
    modulus_lo: float
    modulus_hi: float
    argument_lo: float = 0.0
    argument_hi: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 < self.modulus_lo <= self.modulus_hi < 1.0):
            raise DomainError("annulus sector must sit inside the punctured unit disk")

    def grid(self, steps: int) -> np.ndarray:
        side = max(1, int(math.isqrt(steps)))
        mods = np.linspace(self.modulus_lo, self.modulus_hi, side)
        args = np.linspace(self.argument_lo, self.argument_hi, side)
        M, A = np.meshgrid(mods, args)
        return (M * np.exp(1j * A)).ravel()


@dataclass(frozen=True)
class SeedStrategy:
    """Where to start Newton for each q: lattice points, ring points, or an
    explicit list of x seeds."""

    kind: str                      # "mu-lattice" | "ring" | "explicit"
    lo: int = 0
    hi: int = 0
    seeds: tuple = ()

    def __post_init__(self) -> None:
        if self.kind not in ("mu-lattice", "ring", "explicit"):
            raise DomainError("seed kind must be mu-lattice, ring, or explicit")
        if self.kind == "explicit" and not self.seeds:
            raise DomainError("explicit seed strategy needs a nonempty seed list")
        if self.kind != "explicit" and not self.lo <= self.hi:
            raise DomainError("seed range must satisfy lo <= hi")

    def seeds_for(self, q: complex) -> np.ndarray:
        aq = abs(q)
        if self.kind == "explicit":
            return np.asarray(self.seeds, dtype=complex)
        if self.kind == "mu-lattice":
            return np.array([-(aq ** -s) for s in range(self.lo, self.hi + 1)],
                            dtype=complex)
        return np.array([-(aq ** -(k + 0.5)) for k in range(self.lo, self.hi + 1)],
                        dtype=complex)


@dataclass(frozen=True)
class SweepConfig:
    q_region: RealInterval | AnnulusSector
    q_steps: int
    seed_strategy: SeedStrategy
    newton_tol: float = 1e-11
    residual_tol: float = 1e-10
    output_path: str | None = None
    parallelism: int = 1
    max_iter: int = 60

    def __post_init__(self) -> None:
        if self.q_steps < 1:
            raise DomainError("q_steps must be >= 1")
        if self.parallelism < 1:
            raise DomainError("parallelism must be >= 1")

    @property
    def mode(self) -> str:
        return "real" if isinstance(self.q_region, RealInterval) else "complex"


# ---------------------------------------------------------------------------
# JSONL helpers
# ---------------------------------------------------------------------------

def _dz_json(rec: DoubleZeroRecord) -> dict:
    return {
        "schema": "dz/1",
        "q_re": rec.q.real,
        "q_im": rec.q.imag,
        "zeta_re": rec.zeta.real,
        "zeta_im": rec.zeta.imag,
        "res_theta": rec.residual_theta,
        "res_dtheta": rec.residual_dtheta,
        "jac_cond": rec.jacobian_condition,
        "bound_ok": rec.bound_check,
    }


def write_jsonl(path: str | Path, dicts, append: bool = False) -> None:
    mode = "a" if append else "w"
    with open(path, mode, encoding="utf-8") as f:
        for d in dicts:
            f.write(json.dumps(d) + "\n")


def load_double_zero_records(path: str | Path) -> list[DoubleZeroRecord]:
    """Parse dz/1 lines back into records; other schemas are skipped."""
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                d = json.loads(line)
            except json.JSONDecodeError as e:
                raise RecordParseError(f"{path}:{lineno}: {e}") from e
            if d.get("schema") != "dz/1":
                continue
            try:
                out.append(DoubleZeroRecord(
                    q=complex(d["q_re"], d["q_im"]),
                    zeta=complex(d["zeta_re"], d["zeta_im"]),
                    residual_theta=float(d["res_theta"]),
                    residual_dtheta=float(d["res_dtheta"]),
                    jacobian_condition=float(d["jac_cond"]),
                ))
            except (KeyError, TypeError, ValueError) as e:
                raise RecordParseError(f"{path}:{lineno}: bad dz/1 fields: {e}") from e
    return out


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def sweep_double_zeros(config: SweepConfig) -> list[DoubleZeroRecord]:
    """Solve the double-zero system from every (q, seed) pair in the grid.

    Records append to the output file as their production chunk finishes;
    when the sweep completes the file is rewritten deduplicated and sorted,
    so reruns of one config are byte-identical.  Individual solver failures
    (divergence, region exits) are part of normal operation and simply
    yield no record.
    """
    qgrid = config.q_region.grid(config.q_steps)
    mode = config.mode
    chunks = np.array_split(qgrid, min(config.parallelism * 4, len(qgrid)))
    path = Path(config.output_path) if config.output_path else None
    if path:
        path.write_text("")  # fresh run

    def run_chunk(qchunk: np.ndarray) -> list[DoubleZeroRecord]:
        qs, xs = [], []
        for qv in qchunk:
            seeds = config.seed_strategy.seeds_for(qv)
            qs.append(np.full(len(seeds), qv, dtype=complex))
            xs.append(seeds)
        if not qs:
            return []
        return solve_double_zero_batch(
            np.concatenate(qs), np.concatenate(xs),
            tol=config.newton_tol, max_iter=config.max_iter, mode=mode,
            residual_tol=config.residual_tol)

    results: list[DoubleZeroRecord] = []
    if config.parallelism > 1:
        with ThreadPoolExecutor(max_workers=config.parallelism) as ex:
            chunk_records = list(ex.map(run_chunk, chunks))
    else:
        chunk_records = [run_chunk(c) for c in chunks]
    for recs in chunk_records:
        results.extend(recs)
        if path and recs:
            write_jsonl(path, (_dz_json(r) for r in recs), append=True)
    final = deduplicate_double_zeros(results)
    if path:
        write_jsonl(path, (_dz_json(r) for r in final), append=False)
    return final


def sweep_certificates(config: SweepConfig, s_lo: int, s_hi: int,
                       samples: int = 4096) -> list[DiskCertificate]:
    """One disk certificate per (q, s) pair whose regime precondition holds.

    Pairs outside both regimes (|q| below c0) are skipped with a logged
    reason; pairs whose circle is not inside X_(8^11) emit a failing
    certificate with in_X = False rather than being dropped.
    """
    if s_lo < 1 or s_hi < s_lo:
        raise DomainError("need 1 <= s_lo <= s_hi")
    qgrid = config.q_region.grid(config.q_steps)
    certs: list[DiskCertificate] = []
    c0 = _c0()
    for qv in qgrid:
        qp = as_q(qv)
        if qp.modulus < c0 - 1e-12:
            log.info("skipping |q| = %.6f: below the half-q regime floor", qp.modulus)
            continue
        for s in range(s_lo, s_hi + 1):
            certs.append(certify_disk_rouche(qp, s, regime="auto", samples=samples))
    certs.sort(key=lambda c: (c.q.modulus, c.q.argument, c.s))
    if config.output_path:
        write_jsonl(config.output_path, (c.to_json_dict() for c in certs))
    return certs


# ---------------------------------------------------------------------------
# audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditSummary:
    records_total: int
    max_multiple_zero_modulus: float
    bound_violations: int
    trend_sequence: list = field(default_factory=list)  # (q, zeta, |zeta + e^pi|)

    def to_json_dict(self) -> dict:
        return {
            "records_total": self.records_total,
            "max_multiple_zero_modulus": self.max_multiple_zero_modulus,
            "bound_violations": self.bound_violations,
            "trend_sequence": [list(t) for t in self.trend_sequence],
        }


def audit(records_path: str | Path) -> AuditSummary:
    """Recompute |zeta| per stored record and count bound violations.

    The 8^11 check is recomputed from the coordinates, never read from the
    stored flag.  Real-q records (both q and zeta essentially real) feed
    the trend sequence toward -e^pi, sorted by ascending q.
    """
    records = load_double_zero_records(records_path)
    e_pi = math.exp(math.pi)
    violations = 0
    max_mod = 0.0
    trend = []
    for rec in records:
        zmod = abs(rec.zeta)
        max_mod = max(max_mod, zmod)
        if zmod > MULTIPLE_ZERO_BOUND:
            violations += 1
        real_q = abs(rec.q.imag) <= 1e-9 * (1.0 + abs(rec.q))
        real_z = abs(rec.zeta.imag) <= 1e-9 * (1.0 + zmod)
        if real_q and real_z:
            trend.append((rec.q.real, rec.zeta.real, abs(rec.zeta.real + e_pi)))
    trend.sort(key=lambda t: t[0])
    return AuditSummary(records_total=len(records),
                        max_multiple_zero_modulus=max_mod,
                        bound_violations=violations,
                        trend_sequence=trend)


def export_trend_csv(records_path: str | Path, csv_path: str | Path) -> int:
    """Plot-ready CSV: q, zeta_re, zeta_im, dist_to_minus_e_pi per record."""
    records = load_double_zero_records(records_path)
    e_pi = math.exp(math.pi)
    records.sort(key=lambda r: (abs(r.q), cmath.phase(r.q), abs(r.zeta)))
    with open(csv_path, "w", encoding="utf-8") as f:
        f.write("q,zeta_re,zeta_im,dist_to_minus_e_pi\n")
        for r in records:
            q_repr = r.q.real if r.q.imag == 0 else r.q
            f.write(f"{q_repr},{r.zeta.real},{r.zeta.imag},"
                    f"{abs(r.zeta + e_pi)}\n")
    return len(records)
