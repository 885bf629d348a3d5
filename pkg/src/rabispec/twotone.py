"""Two-tone spectroscopy: driven three-level models and level reconstruction.

A drive near an allowed transition of a three-level system (a below the
other two, a -> c forbidden) dresses the levels and splits the probe line
into two branches.  With omega_ij = omega_j - omega_i and the drive
amplitude Omega_bc, the probe branches are

    b below c:  (w_ab + w_ac - w_d)/2 +- sqrt((w_bc - w_d)^2/4 + Omega^2)
    c below b:  (w_ab + w_ac + w_d)/2 +- sqrt((w_cb - w_d)^2/4 + Omega^2)

Far from resonance one branch is the horizontal probe line and the other a
diagonal with slope -1 (drive-photon absorption) or +1 (emission).  Five
such measured frequencies fix the six lowest circuit levels up to a common
shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rabi

ORDERINGS = ("b_below_c", "c_below_b")
PANEL_TRIPLES = {
    "a": (("g", 0), ("g", 1), ("g", 2)),
    "b": (("e", 0), ("e", 1), ("e", 2)),
    "c": (("g", 0), ("g", 1), ("e", 1)),
}


@dataclass(frozen=True)
class ThreeLevelDrive:
    """Driven three-level system; a is the lowest level, a -> c forbidden.

    ``rabi_bc`` is the drive-induced coupling Omega_bc between b and c (the
    drive amplitude times the root photon number); the a -> c transition
    carries no drive coupling by construction.
    """

    omega_a: float
    omega_b: float
    omega_c: float
    rabi_bc: float
    ordering: str

    def __post_init__(self):
        if self.ordering not in ORDERINGS:
            raise ValueError(f"ordering must be one of {ORDERINGS}, got {self.ordering!r}")
        if not self.omega_a < min(self.omega_b, self.omega_c):
            raise ValueError("level a must lie below both b and c")
        if self.rabi_bc < 0:
            raise ValueError(f"drive coupling must be >= 0, got {self.rabi_bc}")
        if self.ordering == "b_below_c" and self.omega_b > self.omega_c:
            raise ValueError("ordering 'b_below_c' requires omega_b <= omega_c")
        if self.ordering == "c_below_b" and self.omega_c > self.omega_b:
            raise ValueError("ordering 'c_below_b' requires omega_c <= omega_b")

    @property
    def drive_resonance(self) -> float:
        """Drive frequency at which the dressed branches pinch: |omega_bc|."""
        return abs(self.omega_c - self.omega_b)


def avoided_crossing_branches(tld: ThreeLevelDrive, omega_d):
    """Probe-branch frequencies (lower, upper) at drive frequency omega_d."""
    w_d = np.asarray(omega_d, dtype=float)
    w_ab = tld.omega_b - tld.omega_a
    w_ac = tld.omega_c - tld.omega_a
    if tld.ordering == "b_below_c":
        center = 0.5 * (w_ab + w_ac - w_d)
        detuning = (tld.omega_c - tld.omega_b) - w_d
    else:
        center = 0.5 * (w_ab + w_ac + w_d)
        detuning = (tld.omega_b - tld.omega_c) - w_d
    root = np.sqrt(0.25 * detuning**2 + tld.rabi_bc**2)
    return (center - root)[()], (center + root)[()]


@dataclass(frozen=True)
class DressedLevels:
    """Near-degenerate dressed eigenenergies at fixed drive photon number."""

    spectator: float
    lower: float
    upper: float
    block: tuple

    def branch_splitting(self) -> float:
        return self.upper - self.lower


def dressed_eigen(tld: ThreeLevelDrive, omega_d: float, n_drive: int) -> DressedLevels:
    """Dressed energies near resonance, plus the raw 2x2 block eigenvalues.

    The spectator is |a, N>; the dressed pair mixes |b, N> with |c, N-1>
    (b below c) or |c, N+1> (c below b).  The closed form and the direct
    2x2 diagonalization coincide by construction and both are returned.
    """
    if n_drive < 1:
        raise ValueError(f"drive photon number must be >= 1, got {n_drive}")
    spectator = tld.omega_a + n_drive * omega_d
    if tld.ordering == "b_below_c":
        mean = 0.5 * (tld.omega_b + tld.omega_c + (2 * n_drive - 1) * omega_d)
        detuning = (tld.omega_c - tld.omega_b) - omega_d
        e_b = tld.omega_b + n_drive * omega_d
        e_c = tld.omega_c + (n_drive - 1) * omega_d
    else:
        mean = 0.5 * (tld.omega_b + tld.omega_c + (2 * n_drive + 1) * omega_d)
        detuning = (tld.omega_b - tld.omega_c) - omega_d
        e_b = tld.omega_b + n_drive * omega_d
        e_c = tld.omega_c + (n_drive + 1) * omega_d
    root = math.sqrt(0.25 * detuning**2 + tld.rabi_bc**2)
    half_sum = 0.5 * (e_b + e_c)
    block_root = math.sqrt(0.25 * (e_b - e_c) ** 2 + tld.rabi_bc**2)
    return DressedLevels(
        spectator=spectator,
        lower=mean - root,
        upper=mean + root,
        block=(half_sum - block_root, half_sum + block_root),
    )


def classify_slope(transition_kind: str) -> int:
    """Slope of the diagonal probe line vs drive frequency.

    Absorbing one drive photon gives -1; emitting one gives +1.
    """
    slopes = {"absorb_drive": -1, "emit_drive": +1}
    if transition_kind not in slopes:
        raise ValueError(f"transition kind must be one of {tuple(slopes)}, got {transition_kind!r}")
    return slopes[transition_kind]


def minimum_branch_gap(tld: ThreeLevelDrive, span: float | None = None) -> tuple[float, float]:
    """Scan-and-refine minimum of the branch splitting over drive frequency.

    Returns (gap, omega_d at the minimum).  The splitting is unimodal in
    the drive frequency, so a coarse scan followed by ternary refinement
    converges to machine precision.
    """
    res = tld.drive_resonance
    if span is None:
        span = max(50.0 * tld.rabi_bc, 0.1 * max(res, 1.0), 1e-6)
    grid = np.linspace(res - span, res + span, 257)
    lo, hi = avoided_crossing_branches(tld, grid)
    gaps = hi - lo
    i = int(np.argmin(gaps))
    left = grid[max(i - 1, 0)]
    right = grid[min(i + 1, grid.size - 1)]
    for _ in range(200):
        third = (right - left) / 3.0
        m1, m2 = left + third, right - third
        g1 = np.subtract(*avoided_crossing_branches(tld, m1)[::-1])
        g2 = np.subtract(*avoided_crossing_branches(tld, m2)[::-1])
        if g1 <= g2:
            right = m2
        else:
            left = m1
        if right - left < 1e-15 * max(abs(res), 1.0):
            break
    best = 0.5 * (left + right)
    lo, hi = avoided_crossing_branches(tld, best)
    return float(hi - lo), float(best)


@dataclass(frozen=True)
class FiveFrequencies:
    """The five measurable transition frequencies (GHz, all positive)."""

    w_g0g1: float
    w_g0g2: float
    w_e0e1: float
    w_e0e2: float
    w_g0e1: float

    def __post_init__(self):
        for name in ("w_g0g1", "w_g0g2", "w_e0e1", "w_e0e2", "w_g0e1"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class SixLevels:
    """Energies of the six lowest levels with E(g0) = 0 by convention."""

    g0: float
    e0: float
    g1: float
    e1: float
    g2: float
    e2: float

    @property
    def delta_0(self) -> float:
        return self.e0 - self.g0

    @property
    def delta_1(self) -> float:
        return self.e1 - self.g1

    @property
    def delta_2(self) -> float:
        return self.e2 - self.g2

    def five_frequencies(self) -> FiveFrequencies:
        """Regenerate the transition frequencies (exact inverse of the map)."""
        return FiveFrequencies(
            w_g0g1=self.g1 - self.g0,
            w_g0g2=self.g2 - self.g0,
            w_e0e1=self.e1 - self.e0,
            w_e0e2=self.e2 - self.e0,
            w_g0e1=self.e1 - self.g0,
        )


def reconstruct_levels(f: FiveFrequencies) -> SixLevels:
    """Six level energies from five transition frequencies, E(g0) = 0.

    The map is linear and exactly determined; the overall energy shift is
    not observable and is fixed by the g0 = 0 convention.
    """
    e1 = f.w_g0e1
    e0 = f.w_g0e1 - f.w_e0e1
    return SixLevels(
        g0=0.0,
        e0=e0,
        g1=f.w_g0g1,
        e1=e1,
        g2=f.w_g0g2,
        e2=e0 + f.w_e0e2,
    )


@dataclass(frozen=True)
class TwoToneLineMap:
    """Dressed branch frequencies vs drive frequency for one panel."""

    panel: str
    levels: tuple
    drive: ThreeLevelDrive
    omega_d: np.ndarray
    branch_lo: np.ndarray
    branch_hi: np.ndarray


def twotone_linemap(
    params: rabi.CircuitParams,
    n_max: int,
    panel: str,
    omega_d_grid,
    rabi_bc: float,
) -> TwoToneLineMap:
    """Avoided-crossing line map for one drive/probe configuration.

    Panels select the level triple (a, b, c): 'a' probes g0 -> g1 while the
    drive scans g1 -> g2; 'b' the same on the e ladder; 'c' probes g0 -> g1
    while the drive scans between g1 and e1.  Level energies come from the
    labeled circuit spectrum; the drive amplitude is a free input.
    """
    if panel not in PANEL_TRIPLES:
        raise ValueError(f"panel must be one of {tuple(PANEL_TRIPLES)}, got {panel!r}")
    grid = np.asarray(omega_d_grid, dtype=float)
    spec = rabi.solve(params, n_max)
    labels = rabi.assign_labels(spec, params, max_photon=2)
    triple = PANEL_TRIPLES[panel]
    e_a, e_b, e_c = (labels.energy(i, n) for i, n in triple)
    ordering = "b_below_c" if e_b <= e_c else "c_below_b"
    tld = ThreeLevelDrive(
        omega_a=e_a, omega_b=e_b, omega_c=e_c, rabi_bc=rabi_bc, ordering=ordering
    )
    lo, hi = avoided_crossing_branches(tld, grid)
    return TwoToneLineMap(
        panel=panel, levels=triple, drive=tld, omega_d=grid, branch_lo=lo, branch_hi=hi
    )
