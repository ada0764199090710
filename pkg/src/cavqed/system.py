"""Qubit-cavity composite: antenna pickup, coupling rates, truncated
Hamiltonian assembly, dressed-state labeling, and dispersive parameters.

Coupling chain for each (cavity mode k, qubit q, transition j -> j+1):

    V_RX  = (1/2) * l * (l_hat . E_k(r0))        (dipole receiving voltage)
    V_t   = C_ant / (C_ant + C_L) * V_RX         (capacitive divider)
    g_kj  = 2e * |<j|n|j+1>| * sqrt(omega_k / (2*eps0*hbar)) * V_t

with E_k the unit-normalized mode field.  All couplings are real (the -i
phase of the charge matrix elements is a removable gauge), so the assembled
rotating-wave Hamiltonian is a real symmetric matrix in the bare product
basis; energies are angular frequencies (rad/s).

Basis ordering is qubits first, then cavity modes, each truncated to the same
local dimension; labels are tuples (q_0, ..., q_{nq-1}, c_0, ..., c_{nc-1}).
Dressed states are labeled by greedy maximum-overlap assignment and flagged
when the winning overlap is not above 1/2 (hybridization too strong for the
label to mean anything).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cavity import CavityGeometry, CavityMode, eval_fields
from .errors import DispersiveInvalidError, FieldVariationWarning
from .transmon import E_CHARGE, HBAR, DipoleSpec, TransmonSpectrum

EPS0 = 8.854_187_8128e-12  # vacuum permittivity, F/m

#: Relative spread of the axial field over the dipole that triggers
#: :class:`FieldVariationWarning` for the point-sample receiving voltage.
FIELD_VARIATION_TOLERANCE = 0.05

#: A dressed label is flagged when its best overlap is <= threshold + this slack
#: (catches exact 50/50 hybridization despite roundoff).
FLAG_BOUNDARY_SLACK = 1e-9


@dataclass(frozen=True)
class QubitInstance:
    """A dipole-antenna transmon placed in the cavity: geometry, diagonalized
    spectrum, and the two capacitances of the input divider (farads)."""

    dipole: DipoleSpec
    spectrum: TransmonSpectrum
    c_ant: float
    c_load: float

    def __post_init__(self) -> None:
        if self.c_ant <= 0 or self.c_load <= 0:
            raise ValueError("c_ant and c_load must be positive")

    @property
    def divider(self) -> float:
        """Terminal-voltage fraction C_ant / (C_ant + C_L)."""
        return self.c_ant / (self.c_ant + self.c_load)


def validate_qubit_placement(qubit: QubitInstance, geom: CavityGeometry) -> None:
    """Raise ValueError unless both dipole tips lie inside the cavity box."""
    center = np.asarray(qubit.dipole.center)
    axis = np.asarray(qubit.dipole.orientation)
    for sign in (-1.0, 1.0):
        tip = center + sign * 0.5 * qubit.dipole.length * axis
        lims = (geom.a, geom.b, geom.d)
        if any(t < 0.0 or t > lim for t, lim in zip(tip, lims)):
            raise ValueError(f"dipole tip {tuple(tip)} lies outside the cavity")


@dataclass(frozen=True)
class SystemBasis:
    """Product basis of ``n_qubits`` + ``n_cavities`` subsystems, each truncated
    to ``n_levels`` local states, qubits first."""

    n_qubits: int
    n_cavities: int
    n_levels: int

    def __post_init__(self) -> None:
        if self.n_qubits < 0 or self.n_cavities < 0:
            raise ValueError("subsystem counts must be >= 0")
        if self.n_qubits + self.n_cavities == 0:
            raise ValueError("need at least one subsystem")
        if self.n_levels < 2:
            raise ValueError("n_levels must be >= 2")

    @property
    def n_sites(self) -> int:
        return self.n_qubits + self.n_cavities

    @property
    def dim(self) -> int:
        return self.n_levels**self.n_sites

    def labels(self):
        """All occupation tuples in row-major (last site fastest) order, so the
        k-th label is the k-th bare product state."""
        return np.ndindex(*((self.n_levels,) * self.n_sites))

    def index_of(self, label: Sequence[int]) -> int:
        label = tuple(int(x) for x in label)
        if len(label) != self.n_sites:
            raise ValueError(f"label must have {self.n_sites} entries")
        if any(x < 0 or x >= self.n_levels for x in label):
            raise ValueError(f"label {label} outside local dimension {self.n_levels}")
        return int(np.ravel_multi_index(label, (self.n_levels,) * self.n_sites))


@dataclass(frozen=True, eq=False)
class CouplingMatrix:
    """Real coupling rates g[k, q, j] (rad/s) for cavity k, qubit q,
    qubit transition j -> j+1."""

    g: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.g, dtype=float)
        if arr.ndim != 3:
            raise ValueError("g must have shape (n_cavities, n_qubits, n_levels-1)")
        object.__setattr__(self, "g", arr)


def receiving_voltage(dipole: DipoleSpec, mode: CavityMode, geom: CavityGeometry) -> float:
    """Point-dipole receiving voltage (1/2) * l * (l_hat . E(center)) for the
    unit-normalized mode field.

    Samples the axial field at five points along the wire and warns with
    :class:`FieldVariationWarning` when it varies by more than 5% (the
    point-sample value then misrepresents the triangular-current average).
    """
    axis = np.asarray(dipole.orientation)
    center = np.asarray(dipole.center)
    fractions = np.array([-0.5, -0.25, 0.0, 0.25, 0.5])
    points = center + np.outer(fractions, axis) * dipole.length
    e_field, _ = eval_fields(mode, geom, points)
    axial = e_field @ axis
    center_val = float(axial[2])
    spread = float(np.max(np.abs(axial - center_val)))
    reference = max(abs(center_val), float(np.max(np.abs(axial))))
    if reference > 0.0 and spread > FIELD_VARIATION_TOLERANCE * reference:
        warnings.warn(
            f"mode field varies by {spread / reference:.1%} along the dipole; "
            "point-sample receiving voltage is inaccurate "
            "(compare receiving_voltage_line_integral)", FieldVariationWarning,
            stacklevel=2)
    return 0.5 * dipole.length * center_val


def receiving_voltage_line_integral(dipole: DipoleSpec, mode: CavityMode,
                                    geom: CavityGeometry, n_samples: int = 201) -> float:
    """Triangular-current receiving voltage
    integral of (1 - 2|s|/l) * (l_hat . E) ds over s in [-l/2, l/2]
    (midpoint rule); reduces to the point-sample form for a uniform field.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    axis = np.asarray(dipole.orientation)
    center = np.asarray(dipole.center)
    half = 0.5 * dipole.length
    ds = dipole.length / n_samples
    s = -half + (np.arange(n_samples) + 0.5) * ds
    points = center + np.outer(s, axis)
    e_field, _ = eval_fields(mode, geom, points)
    axial = e_field @ axis
    weights = 1.0 - 2.0 * np.abs(s) / dipole.length
    return float(np.sum(weights * axial) * ds)


def terminal_voltage(v_rx: float, c_ant: float, c_load: float) -> float:
    """Voltage across the junction: the divider C_ant/(C_ant + C_L) applied to
    the receiving voltage."""
    if c_ant <= 0 or c_load <= 0:
        raise ValueError("capacitances must be positive")
    return c_ant / (c_ant + c_load) * v_rx


def _coupling_from_terminal_voltage(qubit: QubitInstance, omega_k: float,
                                    j: int, v_t: float) -> float:
    if not 0 <= j < len(qubit.spectrum.charge_elements):
        raise ValueError(f"transition index {j} outside available levels")
    element = abs(qubit.spectrum.charge_elements[j])
    return 2.0 * E_CHARGE * element * math.sqrt(omega_k / (2.0 * EPS0 * HBAR)) * v_t


def qubit_cavity_coupling(qubit: QubitInstance, mode: CavityMode,
                          geom: CavityGeometry, j: int) -> float:
    """Coupling rate g (rad/s) of qubit transition j -> j+1 to the mode:
    2e * |<j|n|j+1>| * sqrt(omega_k/(2*eps0*hbar)) * V_t."""
    v_rx = receiving_voltage(qubit.dipole, mode, geom)
    return _coupling_from_terminal_voltage(qubit, mode.omega, j, qubit.divider * v_rx)


def qubit_cavity_coupling_from_field(qubit: QubitInstance, e_field,
                                     omega_k: float, j: int) -> float:
    """Same coupling rate when the mode's E vector at the dipole center is
    supplied directly (externally computed modes); unit-normalized field,
    omega_k in rad/s."""
    axis = np.asarray(qubit.dipole.orientation)
    v_rx = 0.5 * qubit.dipole.length * float(np.asarray(e_field, dtype=float) @ axis)
    return _coupling_from_terminal_voltage(qubit, omega_k, j, qubit.divider * v_rx)


def coupling_matrix(qubits: Sequence[QubitInstance], modes: Sequence[CavityMode],
                    geom: CavityGeometry, n_levels: int) -> CouplingMatrix:
    """All g[k, q, j] for j = 0..n_levels-2; requires each qubit spectrum to
    provide n_levels-1 charge elements."""
    g = np.zeros((len(modes), len(qubits), n_levels - 1))
    for k, mode in enumerate(modes):
        for q, qubit in enumerate(qubits):
            if len(qubit.spectrum.charge_elements) < n_levels - 1:
                raise ValueError(
                    f"qubit {q} spectrum has {len(qubit.spectrum.charge_elements)} "
                    f"charge elements; need {n_levels - 1}")
            for j in range(n_levels - 1):
                g[k, q, j] = qubit_cavity_coupling(qubit, mode, geom, j)
    return CouplingMatrix(g=g)


def _embed(op: np.ndarray, site: int, n_sites: int, n_levels: int) -> np.ndarray:
    """Kronecker-embed a local operator at ``site`` (identity elsewhere)."""
    result = np.eye(1)
    for s in range(n_sites):
        result = np.kron(result, op if s == site else np.eye(n_levels))
    return result


def assemble_hamiltonian(qubits: Sequence[QubitInstance | TransmonSpectrum],
                         cavity_omegas: Sequence[float],
                         couplings: CouplingMatrix,
                         basis: SystemBasis) -> np.ndarray:
    """Rotating-wave Hamiltonian (real symmetric, rad/s) in the bare product
    basis.

    Bare terms: each qubit's ground-referenced levels (truncated) and each
    cavity's omega_k * a^dag a.  Coupling terms: for every (cavity k, qubit q),
    sum_j g[k,q,j] * (|j><j+1| a_k^dag + h.c.).
    """
    n_q, n_c, m = basis.n_qubits, basis.n_cavities, basis.n_levels
    if len(qubits) != n_q or len(cavity_omegas) != n_c:
        raise ValueError("qubit/cavity counts must match the basis")
    if couplings.g.shape != (n_c, n_q, m - 1):
        raise ValueError(f"couplings shape {couplings.g.shape} does not match "
                         f"basis ({n_c}, {n_q}, {m - 1})")
    spectra = [q.spectrum if isinstance(q, QubitInstance) else q for q in qubits]
    for q, spec in enumerate(spectra):
        if len(spec.levels) < m:
            raise ValueError(f"qubit {q} provides {len(spec.levels)} levels; "
                             f"basis needs {m}")
    h = np.zeros((basis.dim, basis.dim))
    lower_cav = np.diag(np.sqrt(np.arange(1, m)), 1)  # annihilation operator a
    number_cav = lower_cav.T @ lower_cav
    for q, spec in enumerate(spectra):
        h_local = np.diag(np.array(spec.levels[:m]) - spec.levels[0])
        h += _embed(h_local, q, basis.n_sites, m)
    for k, omega_k in enumerate(cavity_omegas):
        h += omega_k * _embed(number_cav, n_q + k, basis.n_sites, m)
    for k in range(n_c):
        for q in range(n_q):
            sigma_lower = np.diag(couplings.g[k, q], 1)  # sum_j g_j |j><j+1|
            term = (_embed(sigma_lower, q, basis.n_sites, m)
                    @ _embed(lower_cav.T, n_q + k, basis.n_sites, m))
            h += term + term.T
    return h


@dataclass(frozen=True, eq=False)
class DressedSpectrum:
    """Eigenvalues labeled by bare product states via greedy maximum overlap."""

    basis: SystemBasis
    energies: np.ndarray
    eigen_index: dict = field(repr=False)
    overlaps: dict = field(repr=False)
    flag_threshold: float

    def _key(self, label: Sequence[int]) -> tuple[int, ...]:
        key = tuple(int(x) for x in label)
        if key not in self.eigen_index:
            raise ValueError(f"label {key} is not a state of the "
                             f"{self.basis.n_sites}-site basis")
        return key

    def energy(self, label: Sequence[int]) -> float:
        """Dressed energy (rad/s) of the state labeled by ``label``."""
        return float(self.energies[self.eigen_index[self._key(label)]])

    def overlap(self, label: Sequence[int]) -> float:
        """Squared overlap of the labeled eigenvector with its bare state."""
        return float(self.overlaps[self._key(label)])

    def is_flagged(self, label: Sequence[int]) -> bool:
        return self.overlap(label) <= self.flag_threshold + FLAG_BOUNDARY_SLACK

    def flagged(self) -> tuple[tuple[int, ...], ...]:
        """Labels whose identification is unreliable, in basis order."""
        return tuple(lbl for lbl in self.basis.labels() if self.is_flagged(lbl))


def dressed_spectrum(hamiltonian: np.ndarray, basis: SystemBasis,
                     flag_threshold: float = 0.5) -> DressedSpectrum:
    """Diagonalize and label.

    Greedy assignment: visit all (bare state, eigenvector) pairs in order of
    decreasing squared overlap (ties broken by bare-then-eigen index for
    determinism) and accept a pair when both members are still unassigned.
    Every label gets exactly one eigenvector; quality is recorded per label and
    exposed through ``is_flagged``/``flagged``.
    """
    if hamiltonian.shape != (basis.dim, basis.dim):
        raise ValueError("hamiltonian dimension does not match the basis")
    energies, vectors = np.linalg.eigh(hamiltonian)
    overlap2 = np.abs(vectors)**2  # [bare index, eigen index]
    dim = basis.dim
    order = np.argsort(-overlap2, axis=None, kind="stable")
    bare_assigned = np.full(dim, -1, dtype=int)
    eigen_taken = np.zeros(dim, dtype=bool)
    remaining = dim
    for flat in order:
        bare, eig = divmod(int(flat), dim)
        if bare_assigned[bare] >= 0 or eigen_taken[eig]:
            continue
        bare_assigned[bare] = eig
        eigen_taken[eig] = True
        remaining -= 1
        if remaining == 0:
            break
    eigen_index = {}
    overlaps = {}
    for i, label in enumerate(basis.labels()):
        eig = int(bare_assigned[i])
        eigen_index[tuple(label)] = eig
        overlaps[tuple(label)] = float(overlap2[i, eig])
    return DressedSpectrum(basis=basis, energies=energies, eigen_index=eigen_index,
                           overlaps=overlaps, flag_threshold=flag_threshold)


@dataclass(frozen=True)
class DispersiveResult:
    """Dressed qubit frequency, anharmonicity, cavity frequency, photon shift,
    and (optionally) qubit-qubit shift, all in rad/s; ``flags`` lists the
    bare labels whose dressed identification was unreliable."""

    omega01: float
    alpha: float | None
    omega_cavity: float
    chi: float
    zeta: float | None
    flags: tuple[tuple[int, ...], ...]


def _label(basis: SystemBasis, **occ: int) -> tuple[int, ...]:
    """Build an occupation label from keyword sites q0, q1, ..., c0, c1, ..."""
    label = [0] * basis.n_sites
    for key, value in occ.items():
        kind, idx = key[0], int(key[1:])
        site = idx if kind == "q" else basis.n_qubits + idx
        label[site] = value
    return tuple(label)


def dispersive_params(dressed: DressedSpectrum, qubit: int = 0, cavity: int = 0,
                      qubit_pair: tuple[int, int] | None = None,
                      strict: bool = True) -> DispersiveResult:
    """Dispersive parameters from ground-referenced dressed energies:

        omega01 = E(q=1) - E(0)
        alpha   = E(q=2) - 2*E(q=1) + E(0)          (None when n_levels < 3)
        omega_c = E(c=1) - E(0)
        chi     = E(q=1,c=1) - E(q=1) - E(c=1) + E(0)
        zeta    = E(qa=1,qb=1) - E(qa=1) - E(qb=1) + E(0)   (when a pair is given)

    With ``strict`` (default) a flagged constituent state raises
    :class:`DispersiveInvalidError` naming it; with ``strict=False`` the values
    are returned and the flagged labels reported in ``flags``.
    """
    basis = dressed.basis
    if not 0 <= qubit < basis.n_qubits:
        raise ValueError(f"qubit index {qubit} outside basis")
    if not 0 <= cavity < basis.n_cavities:
        raise ValueError(f"cavity index {cavity} outside basis")
    q, c = f"q{qubit}", f"c{cavity}"
    used = [_label(basis), _label(basis, **{q: 1}), _label(basis, **{c: 1}),
            _label(basis, **{q: 1, c: 1})]
    if basis.n_levels >= 3:
        used.append(_label(basis, **{q: 2}))
    if qubit_pair is not None:
        qa, qb = qubit_pair
        if qa == qb or not all(0 <= x < basis.n_qubits for x in (qa, qb)):
            raise ValueError(f"invalid qubit pair {qubit_pair}")
        used += [_label(basis, **{f"q{qa}": 1}), _label(basis, **{f"q{qb}": 1}),
                 _label(basis, **{f"q{qa}": 1, f"q{qb}": 1})]
    flags = tuple(lbl for lbl in dict.fromkeys(used) if dressed.is_flagged(lbl))
    if strict and flags:
        raise DispersiveInvalidError(
            f"dressed state(s) {flags} have best overlap <= "
            f"{dressed.flag_threshold:g}; labels are unreliable "
            "(pass strict=False to get values anyway)")
    e0 = dressed.energy(_label(basis))
    e_q1 = dressed.energy(_label(basis, **{q: 1}))
    e_c1 = dressed.energy(_label(basis, **{c: 1}))
    e_q1c1 = dressed.energy(_label(basis, **{q: 1, c: 1}))
    omega01 = e_q1 - e0
    omega_cavity = e_c1 - e0
    chi = e_q1c1 - e_q1 - e_c1 + e0
    alpha = None
    if basis.n_levels >= 3:
        alpha = dressed.energy(_label(basis, **{q: 2})) - 2.0 * e_q1 + e0
    zeta = None
    if qubit_pair is not None:
        qa, qb = qubit_pair
        zeta = (dressed.energy(_label(basis, **{f"q{qa}": 1, f"q{qb}": 1}))
                - dressed.energy(_label(basis, **{f"q{qa}": 1}))
                - dressed.energy(_label(basis, **{f"q{qb}": 1})) + e0)
    return DispersiveResult(omega01=omega01, alpha=alpha, omega_cavity=omega_cavity,
                            chi=chi, zeta=zeta, flags=flags)


def two_level_chi_estimate(g: float, delta: float, alpha: float) -> float:
    """Textbook two-level dispersive estimate g^2 * alpha / (delta*(delta+alpha)).

    A scale/sign sanity reference only: it uses a single transition and a
    sigma-z shift convention, so it underestimates the full ground-referenced
    chi of the multilevel model by roughly a factor of two.
    """
    if delta == 0.0 or delta + alpha == 0.0:
        raise DispersiveInvalidError("estimate undefined at delta = 0 or delta = -alpha")
    return g * g * alpha / (delta * (delta + alpha))
