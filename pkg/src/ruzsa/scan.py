"""Evidence tables for the conjectures on R_m, ell_m and K_m.

Finite data says nothing about liminf or limsup; rows only record per-m values
and the summary only records range statistics.  Anything that could not be
computed inside the node budget is written as ``?``, never defaulted.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .exact import DEFAULT_BUDGET, BudgetExhausted, exact_ruzsa, k_min, min_cover

__all__ = ["CSV_HEADER", "RowData", "ConjectureRow", "ConjectureReport", "compute_row", "scan"]

CSV_HEADER = (
    "m", "r_m", "r_status", "c_m", "ell_num", "ell_den", "k_m",
    "delta_next", "conj1", "conj2_eq", "conj4_ratio", "conj5",
)
UNKNOWN = "?"


@dataclass(frozen=True)
class RowData:
    """Raw solver output for one modulus; None means not certified within budget."""

    m: int
    r_m: int | None
    r_lower: int
    c_m: int | None
    k_m: int | None


def compute_row(m: int, budget: int = DEFAULT_BUDGET, r_only: bool = False) -> RowData:
    try:
        r_m: int | None = exact_ruzsa(m, budget=budget).r_m
        r_lower = r_m
    except BudgetExhausted as exc:
        r_m, r_lower = None, exc.lower
    if r_only:
        return RowData(m, r_m, r_lower, None, None)
    try:
        c_m: int | None = min_cover(m, budget=budget).c_m
    except BudgetExhausted:
        c_m = None
    k_m = None
    if r_m is not None:
        try:
            k_m = k_min(m, r_m, budget=budget, start=c_m).k_m
        except BudgetExhausted:
            pass
    return RowData(m, r_m, r_lower, c_m, k_m)


def _ratio(k: int, m: int) -> str:
    """K_m / sqrt(3m) to 12 significant digits."""
    with localcontext() as ctx:
        ctx.prec = 40
        value = Decimal(k) / Decimal(3 * m).sqrt()
        return str(value.quantize(Decimal(1).scaleb(value.adjusted() - 11)))


def _flag(value: bool | None) -> str:
    return UNKNOWN if value is None else ("true" if value else "false")


@dataclass(frozen=True)
class ConjectureRow:
    m: int
    r_m: int | None
    r_lower: int
    c_m: int | None
    k_m: int | None
    r_next: int | None

    @property
    def r_status(self) -> str:
        return "exact" if self.r_m is not None else "bounded"

    @property
    def ell_m(self) -> Fraction | None:
        return None if self.c_m is None else Fraction(self.c_m**2, self.m)

    @property
    def delta_next(self) -> int | None:
        if self.r_m is None or self.r_next is None:
            return None
        return abs(self.r_next - self.r_m)

    @property
    def conj1_ok(self) -> bool | None:
        d = self.delta_next
        return None if d is None else d <= 1

    @property
    def conj2_equal(self) -> bool | None:
        d = self.delta_next
        return None if d is None else d == 0

    @property
    def conj4_ratio(self) -> str | None:
        return None if self.k_m is None else _ratio(self.k_m, self.m)

    @property
    def conj4_ok(self) -> bool | None:
        # exact form of K_m / sqrt(3m) >= 1
        return None if self.k_m is None else self.k_m**2 >= 3 * self.m

    @property
    def conj5_ok(self) -> bool | None:
        # K_m^2 = m * ell_m = c_m^2
        if self.k_m is None or self.c_m is None:
            return None
        return self.k_m**2 == self.m * self.ell_m

    def csv_fields(self) -> list[str]:
        ell = self.ell_m
        if self.r_m is not None:
            r_cell = str(self.r_m)
        else:
            r_cell = f">={self.r_lower}"
        return [
            str(self.m),
            r_cell,
            self.r_status,
            UNKNOWN if self.c_m is None else str(self.c_m),
            UNKNOWN if ell is None else str(ell.numerator),
            UNKNOWN if ell is None else str(ell.denominator),
            UNKNOWN if self.k_m is None else str(self.k_m),
            UNKNOWN if self.delta_next is None else str(self.delta_next),
            _flag(self.conj1_ok),
            _flag(self.conj2_equal),
            self.conj4_ratio or UNKNOWN,
            _flag(self.conj5_ok),
        ]


@dataclass(frozen=True)
class ConjectureReport:
    m_lo: int
    m_hi: int
    rows: tuple[ConjectureRow, ...]

    def row(self, m: int) -> ConjectureRow:
        return self.rows[m - self.m_lo]

    @property
    def all_exact(self) -> bool:
        return all(r.r_m is not None for r in self.rows)

    def summary(self) -> dict[str, object]:
        rows = self.rows
        ells = [(r.m, r.ell_m) for r in rows if r.ell_m is not None]
        ratios = [(Fraction(r.k_m**2, 3 * r.m), r.m) for r in rows if r.k_m is not None]
        out: dict[str, object] = {
            "moduli": f"{self.m_lo}..{self.m_hi}",
            "r_exact": sum(r.r_m is not None for r in rows),
            "conj1_checked_pairs": sum(r.conj1_ok is not None for r in rows),
            "conj1_failures": [r.m for r in rows if r.conj1_ok is False],
            "conj2_equal_pairs": sum(bool(r.conj2_equal) for r in rows),
            "conj3_ell_min": None,
            "conj3_ell_max": None,
            "ell_below_2": [m for m, e in ells if e < 2],
            "conj4_ratio_min": None,
            "conj4_below_1": [r.m for r in rows if r.conj4_ok is False],
            "conj5_failures": [r.m for r in rows if r.conj5_ok is False],
        }
        if ells:
            lo = min(ells, key=lambda t: (t[1], t[0]))
            hi = max(ells, key=lambda t: (t[1], -t[0]))
            out["conj3_ell_min"] = f"{lo[1]} at m={lo[0]}"
            out["conj3_ell_max"] = f"{hi[1]} at m={hi[0]}"
        if ratios:
            _, m = min(ratios)
            out["conj4_ratio_min"] = f"{_ratio(self.row(m).k_m, m)} at m={m}"
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow(r.csv_fields())
        buf.write("# evidence only: finite ranges cannot decide liminf/limsup statements\n")
        for key, value in self.summary().items():
            if isinstance(value, list):
                value = " ".join(map(str, value)) or "none"
            buf.write(f"# {key}: {'?' if value is None else value}\n")
        return buf.getvalue()


def _row_job(args: tuple[int, int, bool]) -> RowData:
    m, budget, r_only = args
    return compute_row(m, budget, r_only)


def scan(m_lo: int, m_hi: int, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> ConjectureReport:
    """Exact R_m, c_m, K_m for m_lo..m_hi, plus R_{m_hi+1} for the last adjacent pair."""
    if not 1 <= m_lo <= m_hi:
        raise ValueError(f"need 1 <= m_lo <= m_hi, got ({m_lo}, {m_hi})")
    tasks = [(m, budget, False) for m in range(m_lo, m_hi + 1)]
    tasks.append((m_hi + 1, budget, True))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            data = list(pool.map(_row_job, tasks))
    else:
        data = [_row_job(t) for t in tasks]
    rows = tuple(
        ConjectureRow(d.m, d.r_m, d.r_lower, d.c_m, d.k_m, data[i + 1].r_m)
        for i, d in enumerate(data[:-1])
    )
    return ConjectureReport(m_lo, m_hi, rows)
