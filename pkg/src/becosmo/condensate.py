"""Static condensate properties.

Trap, species and interaction parameters go in; the Thomas-Fermi state comes
out: chemical potential, peak density, healing length, sound speed, reduced
and effective couplings, plus the dimensional-reduction validity checks.

Inputs are SI. Internally the interaction formulas use natural units with
hbar = 1 (mass -> m/hbar, energy -> E/hbar, coupling -> g/hbar); DerivedParams
stores SI values again.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .constants import HBAR, SPECIES


class UnsupportedModelError(ValueError):
    """Raised for (dimension, exponent) combinations without a closed form."""


@dataclass(frozen=True)
class AtomSpecies:
    name: str
    mass: float                 # kg
    scattering_length: float    # m

    def __post_init__(self):
        if self.mass <= 0.0:
            raise ValueError("mass must be positive")
        if self.scattering_length <= 0.0:
            raise ValueError("scattering length must be positive")

    @classmethod
    def from_table(cls, name: str, scattering_length: float | None = None) -> "AtomSpecies":
        entry = SPECIES.get(name)
        if entry is None:
            raise KeyError(f"unknown species {name!r}; known: {sorted(SPECIES)}")
        return cls(name, entry["mass_kg"],
                   scattering_length if scattering_length is not None
                   else entry["scattering_length_m"])


@dataclass(frozen=True)
class TrapGeometry:
    dimension: int
    longitudinal_frequency: float            # omega0, rad/s
    transverse_frequency: float | None = None  # omega_z, rad/s, required iff D < 3

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ValueError("dimension must be 1, 2 or 3")
        if self.longitudinal_frequency <= 0.0:
            raise ValueError("longitudinal frequency must be positive")
        if self.dimension < 3:
            if self.transverse_frequency is None:
                raise ValueError("transverse frequency required for dimension < 3")
            if self.transverse_frequency <= self.longitudinal_frequency:
                raise ValueError("transverse confinement must be tighter than longitudinal")
        elif self.transverse_frequency is not None:
            raise ValueError("transverse frequency meaningless for dimension 3")


@dataclass(frozen=True)
class InteractionLaw:
    """Power-law self-interaction ~ g |psi|^(2N).

    bare_coupling is in natural units (g/hbar); leave it None to derive the
    quartic (N=2) coupling from the species' scattering length.
    """
    exponent: float = 2.0
    bare_coupling: float | None = None

    def __post_init__(self):
        if self.exponent <= 1.0:
            raise ValueError("exponent N must exceed 1 (N=1 carries no sound)")


@dataclass(frozen=True)
class CondensateSpec:
    species: AtomSpecies
    trap: TrapGeometry
    atom_number: float
    interaction: InteractionLaw = field(default_factory=InteractionLaw)

    def __post_init__(self):
        if self.atom_number < 1:
            raise ValueError("atom_number must be at least 1")
        if self.trap.dimension == 1 and not math.isclose(self.interaction.exponent, 3.0):
            raise ValueError("1D condensates are supported only with the N=3 coupling")


@dataclass(frozen=True)
class DerivedParams:
    """Thomas-Fermi state of the trapped condensate, SI units."""
    chemical_potential: float          # J
    peak_density: float                # m^-D
    healing_length: float              # m
    sound_speed: float                 # m/s
    thomas_fermi_radius: float         # m
    transverse_width: float | None     # m, D < 3 only
    reduced_coupling: float | None     # J m^D, D < 3 only
    effective_coupling: float          # J m^D for N=2; general-N units vary
    dimension: int
    exponent: float

    def as_dict(self) -> dict:
        return {
            "chemical_potential_J": self.chemical_potential,
            "peak_density_per_mD": self.peak_density,
            "healing_length_m": self.healing_length,
            "sound_speed_m_per_s": self.sound_speed,
            "thomas_fermi_radius_m": self.thomas_fermi_radius,
            "transverse_width_m": self.transverse_width,
            "reduced_coupling_J_mD": self.reduced_coupling,
            "effective_coupling_J_mD": self.effective_coupling,
            "dimension": self.dimension,
            "exponent": self.exponent,
        }


@dataclass(frozen=True)
class ValidityCheck:
    name: str
    ratio: float
    threshold: float
    passed: bool
    description: str


@dataclass(frozen=True)
class ValidityReport:
    checks: tuple[ValidityCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def swave_coupling(species: AtomSpecies) -> float:
    """3D s-wave coupling g = 4 pi hbar^2 a_s / m (J m^3)."""
    return 4.0 * math.pi * HBAR**2 * species.scattering_length / species.mass


def transverse_width(species: AtomSpecies, omega_z: float) -> float:
    """Gaussian ground-state width a_z = sqrt(hbar / (m omega_z))."""
    if omega_z <= 0.0:
        raise ValueError("omega_z must be positive")
    return math.sqrt(HBAR / (species.mass * omega_z))


def reduce_coupling(g3d: float, species: AtomSpecies, omega_z: float) -> float:
    """Fold one tightly confined direction into the coupling constant.

    Integrates |phi_0|^4 of the transverse harmonic ground state, giving
    g3d / (sqrt(2 pi) a_z), i.e. g * sqrt(m omega_z / 2 pi) with hbar = 1.
    """
    if g3d <= 0.0:
        raise ValueError("g3d must be positive")
    a_z = transverse_width(species, omega_z)
    return g3d / (math.sqrt(2.0 * math.pi) * a_z)


def effective_coupling(g: float, exponent: float, rho0: float) -> float:
    """Quadratic-fluctuation coupling g_N = g N(N-1)/2 rho0^(N-2)."""
    if exponent <= 1.0:
        raise ValueError("exponent N must exceed 1 (N=1 carries no sound)")
    if rho0 <= 0.0:
        raise ValueError("rho0 must be positive")
    return g * exponent * (exponent - 1.0) / 2.0 * rho0 ** (exponent - 2.0)


def thomas_fermi(spec: CondensateSpec) -> DerivedParams:
    """Closed-form Thomas-Fermi state for the harmonic trap.

    Supports (D=3, N=2) and (D=2, N=2); everything else lacks the closed-form
    profile this module promises and raises UnsupportedModelError.
    """
    D = spec.trap.dimension
    N = spec.interaction.exponent
    m = spec.species.mass
    omega0 = spec.trap.longitudinal_frequency
    n_atoms = spec.atom_number

    if D == 3 and math.isclose(N, 2.0):
        g = swave_coupling(spec.species)
        a_ho = math.sqrt(HBAR / (m * omega0))
        radius = a_ho * (15.0 * n_atoms * spec.species.scattering_length / a_ho) ** 0.2
        mu = 0.5 * m * omega0**2 * radius**2
        rho0 = mu / g
        a_perp = None
        g_reduced = None
        g_eff = g
    elif D == 2 and math.isclose(N, 2.0):
        omega_z = spec.trap.transverse_frequency
        g3d = swave_coupling(spec.species)
        g_reduced = reduce_coupling(g3d, spec.species, omega_z)
        mu = math.sqrt(n_atoms * m * omega0**2 * g_reduced / math.pi)
        rho0 = mu / g_reduced
        radius = math.sqrt(2.0 * mu / (m * omega0**2))
        a_perp = transverse_width(spec.species, omega_z)
        g_eff = g_reduced
    else:
        raise UnsupportedModelError(
            f"no closed-form Thomas-Fermi profile for (D={D}, N={N})")

    xi = HBAR / math.sqrt(g_eff * rho0 * m)
    c = math.sqrt(g_eff * rho0 / m)
    return DerivedParams(
        chemical_potential=mu,
        peak_density=rho0,
        healing_length=xi,
        sound_speed=c,
        thomas_fermi_radius=radius,
        transverse_width=a_perp,
        reduced_coupling=g_reduced,
        effective_coupling=g_eff,
        dimension=D,
        exponent=N,
    )


def thomas_fermi_atom_count(spec: CondensateSpec, derived: DerivedParams) -> float:
    """Atoms contained in the analytic Thomas-Fermi profile (closed form)."""
    mu = derived.chemical_potential
    g = derived.effective_coupling
    m = spec.species.mass
    omega0 = spec.trap.longitudinal_frequency
    if derived.dimension == 3:
        return (8.0 * math.pi / 15.0) * derived.peak_density * derived.thomas_fermi_radius**3
    if derived.dimension == 2:
        return math.pi * mu**2 / (g * m * omega0**2)
    raise UnsupportedModelError("profile integral available for D in {2, 3} only")


def validate_dimensional_reduction(spec: CondensateSpec, derived: DerivedParams,
                                   threshold: float = 3.0) -> ValidityReport:
    """Scale-hierarchy checks behind the lower-dimensional description.

    (a) mode mixing: the transverse level spacing hbar*omega_z must dominate
        the interaction scale mu; the reported ratio hbar*omega_z/mu equals
        (xi/a_perp)^2.
    (b) mean-field validity: a_perp must dominate the scattering length.

    Failing a check is reported, never raised.
    """
    checks = []
    if derived.transverse_width is not None:
        omega_z = spec.trap.transverse_frequency
        ratio_a = HBAR * omega_z / derived.chemical_potential
        checks.append(ValidityCheck(
            name="mode_mixing_suppression",
            ratio=ratio_a,
            threshold=threshold,
            passed=ratio_a >= threshold,
            description="transverse level spacing vs chemical potential, "
                        "equals (healing length / transverse width)^2",
        ))
        ratio_b = derived.transverse_width / spec.species.scattering_length
        checks.append(ValidityCheck(
            name="mean_field_validity",
            ratio=ratio_b,
            threshold=threshold,
            passed=ratio_b >= threshold,
            description="transverse width vs s-wave scattering length",
        ))
    return ValidityReport(checks=tuple(checks))


def sound_frequency_at_healing_scale(derived: DerivedParams) -> float:
    """omega_xi = c / xi, the phonon frequency at the healing-length scale."""
    return derived.sound_speed / derived.healing_length


def natural_mass(mass_kg: float) -> float:
    """SI mass -> natural units (hbar = 1): m/hbar, in s/m^2."""
    return mass_kg / HBAR


def natural_coupling(g_si: float) -> float:
    """SI coupling (J m^D) -> natural units: g/hbar, in m^D/s."""
    return g_si / HBAR


def natural_energy(e_si: float) -> float:
    """SI energy -> natural units: E/hbar, in rad/s."""
    return e_si / HBAR
