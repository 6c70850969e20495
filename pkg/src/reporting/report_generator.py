"""Size tables, group-action counts and the bench report."""

import json
import math
import random
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import pandas as pd
from loguru import logger
from pydantic import BaseModel

from ..action.base_backend import ActionBackend
from ..monitoring.logger import ibbs_logger
from ..monitoring.metrics_collector import MetricsCollector
from ..protocols.ibbs import (
    ibbs_extract,
    ibbs_s1,
    ibbs_s2,
    ibbs_setup,
    ibbs_u1,
    ibbs_u2,
    ibbs_verify,
)
from ..utils.config import config
from ..utils.errors import ParameterError, RetryLimitExceededError
from ..utils.models import IbbsMode

# security level -> (ceil(log2 p), n)
SECURITY_LEVELS: Dict[int, tuple] = {
    80: (320, 46),
    100: (400, 58),
    128: (512, 74),
    192: (768, 111),
    256: (1024, 148),
}

CONVENTION_TABLE = "table"
CONVENTION_SQRT = "sqrt"

ALGORITHMS = ("Setup", "Extract", "S1", "U1", "S2", "U2", "Verify")

_DOMINANT = {
    "S2": ("modular arithmetic, no isogenies", "O(1)"),
}
_DEFAULT_DOMINANT = ("2n group actions", "O(n^2)")


class SizeRow(BaseModel):
    """Component sizes in bits for one parameter point."""
    level: Optional[int] = None
    p_bits: int
    n: int
    log2_N: int
    convention: str
    mpk: int
    msk: int
    usk: int
    upk: int
    sig: int
    identity: int

    @property
    def sig_bytes(self) -> int:
        return math.ceil(self.sig / 8)

    @property
    def sig_kib(self) -> float:
        return self.sig_bytes / 1024


def component_sizes(p_bits: int, n: int, convention: str = CONVENTION_TABLE,
                    level: Optional[int] = None) -> SizeRow:
    """Bit sizes: MPK = UPK = 2n log p, MSK = 2 log N, USK = 1 + n log N, SIG = 4n + 2n log N.

    ``table`` evaluates log N as log p; ``sqrt`` uses log p / 2 (N is about sqrt p).
    """
    if p_bits < 1 or n < 1:
        raise ParameterError(f"sizes need positive p_bits and n, got ({p_bits}, {n})")
    if convention == CONVENTION_TABLE:
        log_N = p_bits
    elif convention == CONVENTION_SQRT:
        log_N = (p_bits + 1) // 2
    else:
        raise ParameterError(f"unknown size convention '{convention}'")
    return SizeRow(
        level=level,
        p_bits=p_bits,
        n=n,
        log2_N=log_N,
        convention=convention,
        mpk=2 * n * p_bits,
        msk=2 * log_N,
        usk=1 + n * log_N,
        upk=2 * n * p_bits,
        sig=4 * n + 2 * n * log_N,
        identity=n,
    )


def size_report(levels: Iterable[int] = tuple(SECURITY_LEVELS),
                convention: str = CONVENTION_TABLE) -> List[SizeRow]:
    """Rows for named security levels.

    Raises:
        ParameterError: On an unknown level
    """
    rows = []
    for level in levels:
        if level not in SECURITY_LEVELS:
            raise ParameterError(f"unknown security level {level}; known: {sorted(SECURITY_LEVELS)}")
        p_bits, n = SECURITY_LEVELS[level]
        rows.append(component_sizes(p_bits, n, convention, level))
    return rows


def size_table(rows: List[SizeRow]) -> pd.DataFrame:
    frame = pd.DataFrame([
        {
            "level": row.level if row.level is not None else "custom",
            "log2 p": row.p_bits,
            "n": row.n,
            "log2 N": row.log2_N,
            "MPK": row.mpk,
            "MSK": row.msk,
            "USK": row.usk,
            "UPK": row.upk,
            "SIG": row.sig,
            "id": row.identity,
            "SIG bytes": row.sig_bytes,
            "SIG KiB": round(row.sig_kib, 2),
        }
        for row in rows
    ])
    frame.attrs["convention"] = rows[0].convention if rows else CONVENTION_TABLE
    return frame


class OperationCount(BaseModel):
    algorithm: str
    n: int
    actions: int
    expected: int
    dominant: str
    complexity: str


def op_count_report(backend: ActionBackend, n: int, rng: Optional[random.Random] = None,
                    collector: Optional[MetricsCollector] = None) -> List[OperationCount]:
    """Instrumented group-action counts for one otter-mode signing run at vector length n.

    Parameter precomputation (orbit tables, exceptional sets) is outside the counts.
    """
    rng = rng or random.Random(n)
    collector = collector or MetricsCollector(backend.with_n(n))
    counted = collector.backend

    with collector.measure("Setup"):
        params, msk = ibbs_setup(counted, rng, mode=IbbsMode.OTTER.value, strict=False)
    with collector.measure("Extract"):
        keys = ibbs_extract(counted, params, msk, b"bench", rng)
    with collector.measure("S1"):
        rho_s1, signer = ibbs_s1(counted, params, keys, rng)
    with collector.measure("U1"):
        rho_u, user = ibbs_u1(counted, params, rho_s1, b"bench message", rng)
    with collector.measure("S2"):
        rho_s2 = ibbs_s2(counted, params, signer, keys, rho_u)
    with collector.measure("U2"):
        outcome = ibbs_u2(counted, params, keys.pk, b"bench", user, rho_s2)
    if outcome.signature is None:
        raise RetryLimitExceededError(1, [outcome.mismatched_indices])
    with collector.measure("Verify"):
        ibbs_verify(counted, params, keys.pk, b"bench", outcome.signature, b"bench message")

    counts = collector.last_counts()
    rows = []
    for name in ALGORITHMS:
        dominant, complexity = _DOMINANT.get(name, _DEFAULT_DOMINANT)
        rows.append(OperationCount(
            algorithm=name,
            n=n,
            actions=counts[name],
            expected=0 if name == "S2" else 2 * n,
            dominant=dominant,
            complexity=complexity,
        ))
    return rows


def op_count_table(rows: List[OperationCount]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in rows])


def timing_table(backend: ActionBackend, n: int, repeats: int,
                 rng: Optional[random.Random] = None) -> pd.DataFrame:
    """Mean wall time per algorithm over ``repeats`` runs."""
    rng = rng or random.Random(n)
    collector = MetricsCollector(backend.with_n(n))
    for _ in range(repeats):
        op_count_report(backend, n, rng, collector)
    rows = []
    for name in ALGORITHMS:
        mean = collector.mean_time(name) or 0.0
        ibbs_logger.log_performance(f"{name.lower()}_time", mean * 1e3, "ms",
                                    {"n": n, "backend": backend.kind.value, "repeats": repeats})
        rows.append({"algorithm": name, "n": n, "mean ms": round(mean * 1e3, 4)})
    return pd.DataFrame(rows)


class ReportGenerator:
    """Builds the bench tables and renders them as text, JSON or CSV."""

    def __init__(self, reports_dir: Optional[str] = None):
        self.reports_dir = Path(reports_dir or config.get("bench.reports_dir", "reports"))
        self.report_formats = ["text", "json", "csv"]

    def bench(self, backend: ActionBackend, levels: Iterable[int], n_values: Iterable[int],
              repeats: Optional[int] = None, convention: str = CONVENTION_TABLE) -> Dict[str, pd.DataFrame]:
        """Size table, per-n action counts and timings, plus Velu costs for CSIDH."""
        repeats = repeats or config.get("bench.timing_repeats", 5)
        levels = list(levels)
        tables: Dict[str, pd.DataFrame] = {"sizes": size_table(size_report(levels, convention))}
        n_values = list(n_values)
        tables["operations"] = pd.concat(
            [op_count_table(op_count_report(backend, n)) for n in n_values], ignore_index=True
        )
        tables["timings"] = pd.concat(
            [timing_table(backend, n, repeats) for n in n_values], ignore_index=True
        )
        if hasattr(backend, "isogeny_costs"):
            costs = backend.isogeny_costs()
            tables["velu"] = pd.DataFrame(
                [{"ell": ell, **ops} for ell, ops in sorted(costs.items())]
            )
        logger.info(f"Bench complete: levels={levels}, n={n_values}, repeats={repeats}")
        return tables

    def render_text(self, tables: Dict[str, pd.DataFrame]) -> str:
        parts = []
        for name, frame in tables.items():
            title = name.upper()
            if name == "sizes" and frame.attrs.get("convention") == CONVENTION_TABLE:
                title += " (bits; log2 N evaluated as log2 p)"
            elif name == "sizes":
                title += " (bits; log2 N = log2 p / 2)"
            parts.append(f"{title}\n{frame.to_string(index=False)}")
        return "\n\n".join(parts) + "\n"

    def write(self, tables: Dict[str, pd.DataFrame], format: str = "text") -> Path:
        """Write the report into ``reports_dir`` and return its path."""
        if format not in self.report_formats:
            raise ParameterError(f"Unsupported report format: {format}")
        self.reports_dir.mkdir(parents=True, exist_ok=True)
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        if format == "csv":
            path = self.reports_dir / f"bench_{timestamp}"
            path.mkdir(exist_ok=True)
            for name, frame in tables.items():
                frame.to_csv(path / f"{name}.csv", index=False)
        else:
            path = self.reports_dir / f"bench_{timestamp}.{'txt' if format == 'text' else 'json'}"
            if format == "json":
                data: Dict[str, Any] = {name: frame.to_dict(orient="records") for name, frame in tables.items()}
                path.write_text(json.dumps(data, indent=2, default=str), encoding="utf-8")
            else:
                path.write_text(self.render_text(tables), encoding="utf-8")
        logger.info(f"Generated bench report: {path}")
        return path
