"""Closed-form expectations for a two-group random network with tunable mixing.

A network of ``n_total`` nodes is split into a minority group (fraction
``f_minority``) and a majority group. Every unordered node pair carries an
independent Bernoulli edge whose probability depends only on the pair's
group memberships: ``h00`` inside the minority, ``h11`` inside the majority,
and the complementary cross tendencies ``h01 = 1 - h00``, ``h10 = 1 - h11``
between groups. This module holds the parameter type and every closed-form
quantity derived from it (expected edge counts, average group degrees, the
degree gap between groups, its slope in minority homophily, and the critical
minority size where that slope changes sign). Everything here is a pure
function; sampling lives in :mod:`homophily_lab.graphgen`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ValidationError(ValueError):
    """A parameter is outside its admissible range."""


def minority_count(n_total: int, f_minority: float) -> int:
    """Integer minority group size: round(f_minority * n_total), ties away from zero.

    The model treats the minority fraction as continuous, but a concrete
    network needs an integer head count; this rounding rule keeps sweeps
    over ``f_minority`` monotone.
    """
    return int(math.floor(f_minority * n_total + 0.5))


@dataclass(frozen=True)
class ModelParams:
    """One model instance: network size, minority share, and the two
    intra-group connection probabilities.

    Derived quantities (integer group sizes, cross tendencies, the averaged
    cross-pair probability) are exposed as properties. Instances are
    immutable and safe to share across threads.
    """

    n_total: int
    f_minority: float
    h_intra_minority: float
    h_intra_majority: float

    def __post_init__(self) -> None:
        if not isinstance(self.n_total, int) or isinstance(self.n_total, bool):
            raise ValidationError(f"n_total must be an integer, got {self.n_total!r}")
        if self.n_total < 2:
            raise ValidationError(f"n_total must be >= 2, got {self.n_total}")
        if not 0.0 < self.f_minority < 1.0:
            raise ValidationError(f"f_minority out of range (0, 1): {self.f_minority!r}")
        for name in ("h_intra_minority", "h_intra_majority"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} out of range [0, 1]: {value!r}")
        if self.n_minority < 1 or self.n_majority < 1:
            raise ValidationError(
                f"f_minority={self.f_minority} leaves an empty group at "
                f"n_total={self.n_total} (group sizes {self.n_minority}, {self.n_majority})"
            )

    @property
    def n_minority(self) -> int:
        """Number of minority nodes (rounded from f_minority * n_total)."""
        return minority_count(self.n_total, self.f_minority)

    @property
    def n_majority(self) -> int:
        return self.n_total - self.n_minority

    @property
    def h_cross_minority(self) -> float:
        """Minority-to-majority tendency, 1 - h00."""
        return 1.0 - self.h_intra_minority

    @property
    def h_cross_majority(self) -> float:
        """Majority-to-minority tendency, 1 - h11."""
        return 1.0 - self.h_intra_majority

    @property
    def p_cross(self) -> float:
        """Edge probability of one unordered cross-group pair.

        Each cross pair is sampled once with the average of the two
        directional tendencies, which reproduces the combined expected
        cross-edge count while keeping the graph simple and undirected.
        """
        return (self.h_cross_minority + self.h_cross_majority) / 2.0

    @property
    def minority_is_smaller(self) -> bool:
        """True in the standard regime where group 0 really is smaller.

        f_minority >= 0.5 is accepted (the formulas are symmetric), but the
        gap and critical-size interpretations assume a true minority, so
        callers may want to warn when this is False.
        """
        return self.n_minority < self.n_majority


@dataclass(frozen=True)
class ExpectedStats:
    """Closed-form expectations for one model instance.

    ``gap_slope`` uses the integer-size convention (4*n0 - N - 2) / 2, the
    form that exactly matches finite differences of ``gap`` on instances
    whose group sizes were rounded to integers. The continuous-share form
    is available as :func:`gap_slope`.
    """

    e00: float
    e01: float
    e10: float
    e11: float
    k0_mean: float
    k1_mean: float
    gap: float
    gap_slope: float


def expected_edge_counts(params: ModelParams) -> tuple[float, float, float, float]:
    """Expected edge counts (e00, e01, e10, e11) per pair class.

    Intra-group classes: e_ii = h_ii * n_i * (n_i - 1) / 2. The cross-group
    expectation is split into the two directional tendencies, each spread
    over the n0 * n1 unordered pairs with a factor 1/2.
    """
    n0 = params.n_minority
    n1 = params.n_majority
    e00 = params.h_intra_minority * n0 * (n0 - 1) / 2.0
    e01 = n0 * n1 * params.h_cross_minority / 2.0
    e10 = n1 * n0 * params.h_cross_majority / 2.0
    e11 = params.h_intra_majority * n1 * (n1 - 1) / 2.0
    return e00, e01, e10, e11


def expected_group_degrees(params: ModelParams) -> tuple[float, float]:
    """Expected average degree (k0_mean, k1_mean) per group.

    k_i = (2 * e_ii + e01 + e10) / n_i: an intra-group edge contributes two
    degree endpoints inside its group, a cross edge one endpoint to each.

    The two means are summed in mirrored operand order so that swapping the
    groups (sizes and homophilies together) negates the gap bit-exactly.
    """
    e00, e01, e10, e11 = expected_edge_counts(params)
    k0 = (2.0 * e00 + e01 + e10) / params.n_minority
    k1 = (2.0 * e11 + e10 + e01) / params.n_majority
    return k0, k1


def structural_gap(params: ModelParams) -> float:
    """Degree gap k0_mean - k1_mean; positive when the minority out-connects."""
    k0, k1 = expected_group_degrees(params)
    return k0 - k1


def gap_slope(n_total: int, f_minority: float) -> float:
    """Rate of change of the degree gap per unit of minority homophily,
    treating the minority share as continuous: 2*N*f0 - N/2 - 1.

    Use this form for analytic curves and the critical size. When comparing
    against instances whose group sizes were rounded to integers, use
    :func:`gap_slope_integer`; the two differ by the rounding of f0*N.
    """
    if n_total < 2:
        raise ValidationError(f"n_total must be >= 2, got {n_total}")
    if not 0.0 < f_minority < 1.0:
        raise ValidationError(f"f_minority out of range (0, 1): {f_minority!r}")
    return 2 * n_total * f_minority - n_total / 2 - 1


def gap_slope_integer(n_total: int, n_minority: int) -> float:
    """Gap slope (4*n0 - N - 2) / 2 for integer group sizes.

    Exactly equals the finite difference gap(h00=1) - gap(h00=0) of a
    concrete instance, for any majority homophily.
    """
    if not 1 <= n_minority <= n_total - 1:
        raise ValidationError(
            f"n_minority must be in [1, n_total - 1], got {n_minority} of {n_total}"
        )
    return (4 * n_minority - n_total - 2) / 2


def critical_minority_size(n_total: int) -> float:
    """Minority fraction where the gap slope changes sign: (2 + N) / (4 N).

    Strictly decreasing in N, always above 1/4 for finite N, and tending to
    0.25 as the network grows. Below this fraction, raising minority
    homophily widens the degree gap against the minority.
    """
    if n_total < 2:
        raise ValidationError(f"n_total must be >= 2, got {n_total}")
    return (2 + n_total) / (4 * n_total)


def expected_stats(params: ModelParams) -> ExpectedStats:
    """All closed-form quantities for one instance in a single record."""
    e00, e01, e10, e11 = expected_edge_counts(params)
    k0 = (2.0 * e00 + e01 + e10) / params.n_minority
    k1 = (2.0 * e11 + e10 + e01) / params.n_majority
    return ExpectedStats(
        e00=e00,
        e01=e01,
        e10=e10,
        e11=e11,
        k0_mean=k0,
        k1_mean=k1,
        gap=k0 - k1,
        gap_slope=gap_slope_integer(params.n_total, params.n_minority),
    )
