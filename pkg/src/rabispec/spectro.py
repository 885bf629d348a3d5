"""Single-tone spectroscopy: transition maps, hanger lineshape, parameter fits.

Transmission through the feed line dips when the probe hits a transition
|k> -> |l> of the coupled circuit with a nonvanishing quadrature matrix
element.  The resonance itself follows the asymmetric notch ("hanger")
lineshape

    S21(w_p) = 1 - (Q_L/Q_e) e^(i phi) / (1 + 2i Q_L (w_p - w0)/w0),

multiplied by a smooth background polynomial of the probe frequency, and
|S21| may exceed one for some phi.  Circuit parameters (delta, omega, g)
are extracted by least-squares fits of measured transition frequencies to
the diagonalized Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import rabi
from .errors import IllConditionedDataError
from .levmar import least_squares_lm

# magnetic flux quantum h/2e in Wb
FLUX_QUANTUM_WB = 2.067833848e-15

DEFAULT_TRANSITIONS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3))
DEFAULT_ELEMENT_FLOOR = 1e-3


@dataclass(frozen=True)
class LineshapeParams:
    """Notch resonance: frequency, total and external Q, asymmetry phase.

    q_total <= q_external is not required; the asymmetric lineshape allows
    either ordering.
    """

    omega0: float
    q_total: float
    q_external: float
    phi: float = 0.0

    def __post_init__(self):
        if not (self.omega0 > 0 and math.isfinite(self.omega0)):
            raise ValueError(f"omega0 must be positive and finite, got {self.omega0}")
        if self.q_total <= 0 or self.q_external <= 0:
            raise ValueError("quality factors must be positive")
        if not math.isfinite(self.phi):
            raise ValueError("phi must be finite")


@dataclass(frozen=True)
class BackgroundPoly:
    """Background transmission vs probe frequency, independent of bias.

    ``coefficients`` are ascending powers of (omega_p - center); fitting
    uses a centered variable because raw powers of a ~6 GHz frequency over
    a narrow window are badly collinear.
    """

    coefficients: tuple
    center: float = 0.0

    def __post_init__(self):
        if len(self.coefficients) == 0 or len(self.coefficients) - 1 > 8:
            raise ValueError("background degree must be between 0 and 8")
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, omega_p):
        u = np.asarray(omega_p, dtype=float) - self.center
        out = np.zeros_like(u)
        for c in reversed(self.coefficients):
            out = out * u + c
        return out[()]


@dataclass(frozen=True)
class SquidParams:
    """Josephson coupler: junction critical current, flux bias, loop ratio.

    Currents in microamperes; n_phi_c is the coupler flux in units of the
    flux quantum.
    """

    i_c: float
    n_phi_c: float
    i_b: float = 0.0
    r_c: float = 0.05

    def __post_init__(self):
        if self.i_c <= 0:
            raise ValueError(f"critical current must be > 0, got {self.i_c}")
        for name in ("n_phi_c", "i_b", "r_c"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class TransitionMap:
    """Transition frequencies and quadrature elements on a bias grid.

    ``frequencies[(k, l)]`` holds E_l - E_k at each grid point regardless of
    visibility; ``curves`` masks (with NaN) every point whose matrix element
    is at or below ``element_floor``, which is what a transmission
    measurement would actually show.
    """

    epsilon_grid: np.ndarray
    frequencies: dict = field(default_factory=dict)
    elements: dict = field(default_factory=dict)
    element_floor: float = DEFAULT_ELEMENT_FLOOR

    @property
    def curves(self) -> dict:
        masked = {}
        for pair, freq in self.frequencies.items():
            visible = self.elements[pair] > self.element_floor
            masked[pair] = np.where(visible, freq, np.nan)
        return masked


def transition_map(
    params_at_eps,
    epsilon_grid,
    n_max: int = rabi.DEFAULT_N_MAX,
    transitions=DEFAULT_TRANSITIONS,
    element_floor: float = DEFAULT_ELEMENT_FLOOR,
) -> TransitionMap:
    """Diagonalize along a bias grid and collect transition frequencies.

    ``params_at_eps`` maps a bias value (GHz) to CircuitParams; typically
    only epsilon varies.  States are ordinal (labels |i n> are not defined
    away from the symmetry point).
    """
    grid = np.asarray(epsilon_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("epsilon grid must be a non-empty 1-d array")
    freqs = {pair: np.empty(grid.size) for pair in transitions}
    elems = {pair: np.empty(grid.size) for pair in transitions}
    for i, eps in enumerate(grid):
        spec = rabi.solve(params_at_eps(float(eps)), n_max)
        for k, l in transitions:
            freqs[(k, l)][i] = spec.eigenvalues[l] - spec.eigenvalues[k]
            elems[(k, l)][i] = rabi.transition_matrix_element(spec, k, l)
    return TransitionMap(
        epsilon_grid=grid, frequencies=freqs, elements=elems, element_floor=element_floor
    )


def s21(params: LineshapeParams, omega_p):
    """Complex transmission of the side-coupled resonator at probe frequency."""
    w = np.asarray(omega_p, dtype=float)
    if np.any(w <= 0):
        raise ValueError("probe frequency must be positive")
    depth = (params.q_total / params.q_external) * np.exp(1j * params.phi)
    detuning = 1.0 + 2j * params.q_total * (w - params.omega0) / params.omega0
    return (1.0 - depth / detuning)[()]


def fit_lineshape(
    data,
    init: LineshapeParams,
    background: BackgroundPoly | None = None,
) -> tuple[LineshapeParams, BackgroundPoly, float]:
    """Fit |S21_bg * S21| to measured magnitude data.

    ``data`` is a sequence of (omega_p, |S21|) pairs, at least 20 points
    spanning the resonance.  The background polynomial is fitted jointly
    with the lineshape (they enter multiplicatively).  Returns the fitted
    lineshape, background, and RMS residual.
    """
    points = np.asarray(data, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError("data must be a sequence of (omega_p, magnitude) pairs")
    if points.shape[0] < 20:
        raise ValueError(f"need at least 20 data points, got {points.shape[0]}")
    w, y = points[:, 0], points[:, 1]
    if np.ptp(y) < 1e-12 * max(float(np.max(np.abs(y))), 1.0):
        raise IllConditionedDataError("data show no resonance dip (flat magnitude)")
    if background is None:
        background = BackgroundPoly((1.0, 0.0, 0.0, 0.0), center=float(np.mean(w)))
    n_coef = len(background.coefficients)
    center = background.center

    def unpack(x):
        shape = LineshapeParams(
            omega0=abs(x[0]), q_total=abs(x[1]), q_external=abs(x[2]), phi=x[3]
        )
        return shape, BackgroundPoly(tuple(x[4:]), center=center)

    def residual(x):
        try:
            shape, poly = unpack(x)
        except ValueError:
            return np.full(y.size, 1e6)
        return np.abs(poly(w) * s21(shape, w)) - y

    x0 = np.concatenate(
        [[init.omega0, init.q_total, init.q_external, init.phi], background.coefficients]
    )
    result = least_squares_lm(residual, x0)
    shape, poly = unpack(result.x)
    return shape, poly, result.rms


def estimate_lineshape(omega_p, magnitude) -> LineshapeParams:
    """Rough lineshape parameters from magnitude data, for fit seeding.

    Takes the dip position as the resonance, the half-depth width as the
    loaded linewidth, and the relative dip depth as q_total/q_external.
    """
    w = np.asarray(omega_p, dtype=float)
    y = np.asarray(magnitude, dtype=float)
    dip = int(np.argmin(y))
    omega0 = float(w[dip])
    edge = max(y.size // 10, 2)
    baseline = float(np.median(np.concatenate([y[:edge], y[-edge:]])))
    depth = max(baseline - float(y[dip]), 1e-6 * max(baseline, 1.0))
    below = w[y <= baseline - 0.5 * depth]
    fwhm = float(np.ptp(below)) if below.size >= 2 else float(np.ptp(w)) / 10.0
    fwhm = max(fwhm, float(np.ptp(w)) / (10.0 * y.size))
    q_total = max(omega0 / fwhm, 1.0)
    q_external = max(q_total * baseline / depth, 1.0)
    return LineshapeParams(omega0=omega0, q_total=q_total, q_external=q_external, phi=0.0)


def fit_circuit_params(
    observed,
    init: rabi.CircuitParams,
    n_max: int = rabi.DEFAULT_N_MAX,
) -> tuple[rabi.CircuitParams, float]:
    """Fit (delta, omega, g) to observed transition frequencies.

    ``observed`` is a sequence of (epsilon, (k, l), frequency) with ordinal
    state indices; at least 6 observations spanning at least 2 distinct
    transitions.  Bias values are held fixed; delta, omega, g are scaled to
    order one by the initial guess for conditioning.  Returns the fitted
    parameters and the RMS residual; a residual far above the measurement
    scale means the observations are inconsistent with any parameter set.
    """
    rows = [(float(eps), (int(pair[0]), int(pair[1])), float(freq)) for eps, pair, freq in observed]
    if len(rows) < 6:
        raise ValueError(f"need at least 6 observations, got {len(rows)}")
    if len({pair for _, pair, _ in rows}) < 2:
        raise ValueError("observations must span at least 2 distinct transitions")
    scale = np.array([max(init.delta, 0.1), init.omega, max(init.g, 0.1)])
    targets = np.array([freq for _, _, freq in rows])
    by_eps = {}
    for i, (eps, pair, _) in enumerate(rows):
        by_eps.setdefault(eps, []).append((i, pair))

    def residual(x):
        delta, omega, g = np.abs(x) * scale
        out = np.empty(len(rows))
        for eps, entries in by_eps.items():
            spec = rabi.solve(
                rabi.CircuitParams(delta=delta, omega=omega, g=g, epsilon=eps), n_max
            )
            for i, (k, l) in entries:
                out[i] = spec.eigenvalues[l] - spec.eigenvalues[k]
        return out - targets

    result = least_squares_lm(residual, np.array([init.delta, init.omega, init.g]) / scale)
    delta, omega, g = np.abs(result.x) * scale
    return rabi.CircuitParams(delta=float(delta), omega=float(omega), g=float(g)), result.rms


def squid_inductance(s: SquidParams) -> float:
    """Josephson inductance of the coupler SQUID in nanohenry.

    L = Phi0 / (2 pi sqrt((2 I_c cos|pi n_phi_c|)^2 - I_b^2)); the flux and
    bias current must leave a real root.  Exactly half-integer flux zeroes
    the cosine and is rejected as divergent.
    """
    # remainder folds the flux into [-0.5, 0.5]; |cos(pi n)| is periodic in n
    folded = math.remainder(s.n_phi_c, 1.0)
    cos_term = 0.0 if abs(folded) == 0.5 else abs(math.cos(math.pi * folded))
    under_root = (2.0 * s.i_c * cos_term) ** 2 - s.i_b**2
    if under_root <= 0.0:
        raise ValueError(
            f"no real inductance: (2 I_c cos|pi n_phi_c|)^2 = "
            f"{(2.0 * s.i_c * cos_term) ** 2:.3e} uA^2 does not exceed "
            f"I_b^2 = {s.i_b ** 2:.3e} uA^2"
        )
    # currents in uA -> 1e-6 A; report nH (1e9 nH/H)
    return FLUX_QUANTUM_WB / (2.0 * math.pi * math.sqrt(under_root) * 1e-6) * 1e9


def coupler_flux(n_phi_qubit: float, r_c: float = 0.05) -> float:
    """Coupler flux bias induced by the qubit flux via the loop-area ratio."""
    return r_c * n_phi_qubit
