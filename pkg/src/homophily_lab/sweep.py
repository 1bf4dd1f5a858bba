"""Parameter-grid sweeps joining closed-form and Monte Carlo results.

Emits the plot-ready tables behind the five standard summary panels
(group degrees and gaps versus minority homophily, gap slopes across
minority sizes, and the critical-size curve with empirical detections),
plus CSV/JSON serialization. No rendering here; output is data only.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import IO, Sequence

from .model import (
    ModelParams,
    ValidationError,
    critical_minority_size,
    expected_stats,
    gap_slope_integer,
    minority_count,
)
from .montecarlo import McConfig, mc_degree_summary, mc_gap_slope, mix_seed

PANELS = ("a", "b", "c", "d", "e")

DEFAULT_SLOPE_H_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


class BudgetExceededError(RuntimeError):
    """Replicate budget ran out before the requested precision was reached."""


class NoSignChangeError(ValidationError):
    """The search bracket does not straddle a slope sign change."""


@dataclass(frozen=True)
class SweepRow:
    """One grid point: analytic columns always set, mc columns only when
    simulation was requested. Field order is the canonical column order."""

    n_total: int
    f_minority: float
    h00: float
    h11: float
    k0_analytic: float
    k1_analytic: float
    gap_analytic: float
    slope_analytic: float
    k0_mc_mean: float | None = None
    k0_mc_se: float | None = None
    k1_mc_mean: float | None = None
    k1_mc_se: float | None = None
    gap_mc_mean: float | None = None
    gap_mc_se: float | None = None
    replicates: int | None = None
    master_seed: int | None = None


@dataclass(frozen=True)
class SlopeRow:
    """Gap slope at one (minority size, majority homophily) point: the
    integer-convention analytic value plus an optional Monte Carlo estimate."""

    n_total: int
    f_minority: float
    h11: float
    slope_analytic: float
    slope_mc_mean: float | None = None
    slope_mc_se: float | None = None
    replicates: int | None = None
    master_seed: int | None = None


@dataclass(frozen=True)
class CriticalSizeEstimate:
    """Critical minority size at one network size: the closed form
    (2 + N) / (4 N) plus, when a search ran, the empirical root of the
    Monte Carlo slope sign with its final bracket width. The empirical value
    is reported as found, never snapped to the analytic one."""

    n_total: int
    f_star_analytic: float
    f_star_empirical: float | None = None
    bracket_width: float | None = None
    h11_used: float | None = None


def sweep(
    n_values: Sequence[int],
    f_values: Sequence[float],
    h00_values: Sequence[float],
    h11_values: Sequence[float],
    mc: McConfig | None = None,
) -> list[SweepRow]:
    """One row per grid point, ordered lexicographically in (N, f0, h00, h11).

    With an ``mc`` config, grid point i runs its replicates under the
    derived master seed ``mix_seed(mc.master_seed, i)``, so any subset of
    points can be recomputed independently and in any order.
    """
    rows: list[SweepRow] = []
    index = 0
    for n in n_values:
        for f in f_values:
            for h00 in h00_values:
                for h11 in h11_values:
                    try:
                        params = ModelParams(int(n), float(f), float(h00), float(h11))
                    except ValidationError as err:
                        raise ValidationError(
                            f"invalid grid point #{index} "
                            f"(n={n}, f0={f}, h00={h00}, h11={h11}): {err}"
                        ) from err
                    stats = expected_stats(params)
                    row = SweepRow(
                        n_total=params.n_total,
                        f_minority=params.f_minority,
                        h00=params.h_intra_minority,
                        h11=params.h_intra_majority,
                        k0_analytic=stats.k0_mean,
                        k1_analytic=stats.k1_mean,
                        gap_analytic=stats.gap,
                        slope_analytic=stats.gap_slope,
                    )
                    if mc is not None:
                        point_seed = mix_seed(mc.master_seed, index)
                        k0, k1, gap = mc_degree_summary(
                            params, McConfig(mc.replicates, point_seed)
                        )
                        row = dataclasses.replace(
                            row,
                            k0_mc_mean=k0.mean,
                            k0_mc_se=k0.std_error,
                            k1_mc_mean=k1.mean,
                            k1_mc_se=k1.std_error,
                            gap_mc_mean=gap.mean,
                            gap_mc_se=gap.std_error,
                            replicates=mc.replicates,
                            master_seed=point_seed,
                        )
                    rows.append(row)
                    index += 1
    return rows


def detect_critical_size(
    n_total: int,
    h11: float,
    mc: McConfig,
    bracket: tuple[float, float],
    tol: float,
    *,
    h_grid: Sequence[float] = DEFAULT_SLOPE_H_GRID,
    max_replicates: int | None = None,
) -> CriticalSizeEstimate:
    """Bisect the minority fraction on the sign of the Monte Carlo gap slope.

    The bracket must straddle a sign change of the integer-convention
    analytic slope (checked before any simulation). At each midpoint the
    slope is estimated over ``h_grid``; when the estimate is within three
    standard errors of zero, too noisy to call, the step direction falls
    back to the analytic integer-form sign so the search cannot stall near
    the root. ``max_replicates`` caps the total replicates across all
    bisection steps.
    """
    f_lo, f_hi = float(bracket[0]), float(bracket[1])
    if not (0.0 < f_lo < f_hi < 1.0):
        raise ValidationError(f"bracket must satisfy 0 < f_lo < f_hi < 1, got {bracket!r}")
    if tol <= 0.0:
        raise ValidationError(f"tol must be positive, got {tol}")

    def analytic_sign(f: float) -> float:
        return gap_slope_integer(n_total, minority_count(n_total, f))

    if not (analytic_sign(f_lo) < 0.0 < analytic_sign(f_hi)):
        raise NoSignChangeError(
            f"slope sign does not change over bracket ({f_lo}, {f_hi}) at "
            f"n_total={n_total}: slopes "
            f"{analytic_sign(f_lo)} and {analytic_sign(f_hi)}"
        )

    per_step = len(h_grid) * mc.replicates
    spent = 0
    step = 0
    while f_hi - f_lo > tol:
        if max_replicates is not None and spent + per_step > max_replicates:
            raise BudgetExceededError(
                f"replicate budget {max_replicates} exhausted after {spent} "
                f"replicates with bracket width {f_hi - f_lo:.6g} > tol {tol:.6g}"
            )
        f_mid = (f_lo + f_hi) / 2.0
        step_cfg = McConfig(mc.replicates, mix_seed(mc.master_seed, step))
        est = mc_gap_slope(n_total, f_mid, h11, list(h_grid), step_cfg)
        spent += per_step
        step += 1
        if abs(est.mean) > 3.0 * est.std_error:
            slope_sign = est.mean
        else:
            slope_sign = analytic_sign(f_mid)
        if slope_sign < 0.0:
            f_lo = f_mid
        else:
            f_hi = f_mid

    return CriticalSizeEstimate(
        n_total=n_total,
        f_star_analytic=critical_minority_size(n_total),
        f_star_empirical=(f_lo + f_hi) / 2.0,
        bracket_width=f_hi - f_lo,
        h11_used=float(h11),
    )


@dataclass(frozen=True)
class FigureOptions:
    """Defaults for the panel datasets; all documented choices.

    A strongly homophilic majority (h11 = 0.8) for the degree/gap panels,
    100 replicates per point at N = 1000, and empirical critical-size
    detection at N = 1000 only. Set ``replicates`` to 0 for analytic-only
    tables; ``detect_budget`` caps the total replicates each critical-size
    search may spend.
    """

    n_total: int = 1000
    h11: float = 0.8
    f_small: float = 0.2
    f_large: float = 0.3
    h00_step: float = 0.1
    replicates: int = 100
    master_seed: int = 0
    # panel d
    f_grid: tuple[float, ...] = (0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45)
    h11_set: tuple[float, ...] = (0.2, 0.5, 0.8)
    slope_h_grid: tuple[float, ...] = DEFAULT_SLOPE_H_GRID
    # panel e
    n_grid: tuple[int, ...] = (10, 100, 1000, 10_000, 100_000, 1_000_000)
    detect_n: tuple[int, ...] = (1000,)
    detect_bracket: tuple[float, float] = (0.15, 0.35)
    detect_tol: float = 0.01
    detect_h11: float = 0.5
    detect_budget: int | None = None

    def mc_config(self) -> McConfig | None:
        if self.replicates <= 0:
            return None
        return McConfig(self.replicates, self.master_seed)


def _h00_grid(step: float) -> list[float]:
    count = int(round(1.0 / step))
    return [min(i * step, 1.0) for i in range(count + 1)]


def fig1_dataset(panel: str, options: FigureOptions | None = None) -> list:
    """Dataset behind one summary panel.

    a, b: group mean degrees versus h00 at the small / large minority
    fraction (SweepRow table). c: both fractions together, for the gap
    comparison (SweepRow). d: gap slope versus minority fraction for several
    majority homophilies (SlopeRow). e: critical size versus network size,
    analytic curve plus empirical detections (CriticalSizeEstimate rows).
    """
    opts = options or FigureOptions()
    mc = opts.mc_config()
    if panel not in PANELS:
        raise ValidationError(f"unknown panel {panel!r}; expected one of {'|'.join(PANELS)}")

    if panel in ("a", "b"):
        f = opts.f_small if panel == "a" else opts.f_large
        return sweep([opts.n_total], [f], _h00_grid(opts.h00_step), [opts.h11], mc)
    if panel == "c":
        return sweep(
            [opts.n_total],
            [opts.f_small, opts.f_large],
            _h00_grid(opts.h00_step),
            [opts.h11],
            mc,
        )
    if panel == "d":
        rows: list[SlopeRow] = []
        index = 0
        for f in opts.f_grid:
            for h11 in opts.h11_set:
                analytic = gap_slope_integer(opts.n_total, minority_count(opts.n_total, f))
                row = SlopeRow(opts.n_total, f, h11, analytic)
                if mc is not None:
                    point_seed = mix_seed(mc.master_seed, index)
                    est = mc_gap_slope(
                        opts.n_total,
                        f,
                        h11,
                        list(opts.slope_h_grid),
                        McConfig(mc.replicates, point_seed),
                    )
                    row = dataclasses.replace(
                        row,
                        slope_mc_mean=est.mean,
                        slope_mc_se=est.std_error,
                        replicates=mc.replicates,
                        master_seed=point_seed,
                    )
                rows.append(row)
                index += 1
        return rows

    # panel e
    all_n = sorted(set(opts.n_grid) | (set(opts.detect_n) if mc is not None else set()))
    detected: dict[int, CriticalSizeEstimate] = {}
    if mc is not None:
        for index, n in enumerate(sorted(opts.detect_n)):
            try:
                detected[n] = detect_critical_size(
                    n,
                    opts.detect_h11,
                    McConfig(mc.replicates, mix_seed(mc.master_seed, index)),
                    opts.detect_bracket,
                    opts.detect_tol,
                    h_grid=opts.slope_h_grid,
                    max_replicates=opts.detect_budget,
                )
            except NoSignChangeError:
                # degenerate size (bracket cannot straddle the root): keep
                # the analytic value, leave the empirical columns empty
                pass
    return [
        detected.get(n, CriticalSizeEstimate(n, critical_minority_size(n)))
        for n in all_n
    ]


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        if math.isfinite(value):
            return format(value, ".17g")  # round-trip exact
        return repr(value)
    return str(value)


def table_columns(row_type: type) -> list[str]:
    return [field.name for field in dataclasses.fields(row_type)]


def write_csv(rows: Sequence, out: IO[str], row_type: type | None = None) -> None:
    """Write rows of one dataclass type as CSV in canonical column order."""
    row_type = row_type or type(rows[0])
    columns = table_columns(row_type)
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(_format_value(getattr(row, c)) for c in columns) + "\n")


def write_json(rows: Sequence, out: IO[str], row_type: type | None = None) -> None:
    """Write rows as a JSON array of records with the same field names."""
    row_type = row_type or type(rows[0])
    columns = table_columns(row_type)
    records = [{c: getattr(row, c) for c in columns} for row in rows]
    json.dump(records, out, indent=1)
    out.write("\n")


def write_table(rows: Sequence, out: IO[str], fmt: str, row_type: type | None = None) -> None:
    if row_type is None and not rows:
        raise ValidationError("cannot infer columns of an empty table; pass row_type")
    if fmt == "csv":
        write_csv(rows, out, row_type)
    elif fmt == "json":
        write_json(rows, out, row_type)
    else:
        raise ValidationError(f"unknown output format {fmt!r}; expected csv or json")
