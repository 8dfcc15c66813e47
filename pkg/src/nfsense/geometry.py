"""Antenna array geometry builders.

All arrays are centered on the origin and use the densest allowed element
spacing (lambda/2) so the discrete layouts track their continuous-aperture
approximations as closely as possible.

Frame convention: the evaluation axis (broadside) is +z.  The ULA lies on
the x axis, the URA and UPCA span the x-y plane.  The UCA is placed in the
x-z plane (ring normal along y): a ring seen face-on has every element
equidistant from any on-axis point and therefore no range selectivity at
all, so the ring must be edge-on to the axis it resolves ranges along.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "SPEED_OF_LIGHT",
    "GeometryKind",
    "ProcessingMode",
    "ArrayGeometry",
    "SensingSetup",
    "build_ula",
    "build_uca",
    "build_ura",
    "build_upca",
    "single_element",
    "build_array",
    "fraunhofer_distance",
    "effective_aperture_ula",
    "simo_miso_setup",
    "mimo_setup",
    "export_geometry_csv",
]

SPEED_OF_LIGHT = 299792458.0
"Speed of light in m/s."

# absolute slack on the lambda/2 spacing ceiling and on centering checks
_TOL = 1e-9


class GeometryKind(Enum):
    """The four supported array layouts."""

    ULA = "ula"
    UCA = "uca"
    URA = "ura"
    UPCA = "upca"

    @property
    def argument_scale(self) -> float:
        """Scale coefficient mapping d_FA * d_ver onto the layout's unified
        array-factor argument."""
        return _ARGUMENT_SCALE[self]


_ARGUMENT_SCALE = {
    GeometryKind.ULA: 0.25,
    GeometryKind.UCA: math.pi / 16.0,
    GeometryKind.URA: 0.125,
    GeometryKind.UPCA: 1.0 / 16.0,
}


class ProcessingMode(Enum):
    """Single aperture (SIMO/MISO) or two identical collocated apertures."""

    SIMO_MISO = 1
    MIMO = 2

    @property
    def power_exponent(self) -> int:
        """Power to raise the single-aperture |AF|^2 to: 1 or 2."""
        return self.value


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """Immutable element layout.

    kind is None for the degenerate single-element "array" used as the
    plain side of a SIMO/MISO link.  aperture is the actual end-to-end
    extent recomputed from the element positions (ULA: length, UCA/UPCA:
    outer diameter, URA: diagonal).
    """

    kind: GeometryKind | None
    wavelength: float
    elements: np.ndarray
    aperture: float

    def __post_init__(self):
        self.elements.setflags(write=False)

    @property
    def n_elements(self) -> int:
        return self.elements.shape[0]


def _finish(kind, wavelength, positions) -> ArrayGeometry:
    pos = np.asarray(positions, dtype=float)
    pos = pos - pos.mean(axis=0)
    if kind is GeometryKind.ULA:
        aperture = float(pos[:, 0].max() - pos[:, 0].min())
    elif kind is GeometryKind.URA:
        aperture = float(math.hypot(pos[:, 0].max() - pos[:, 0].min(),
                                    pos[:, 1].max() - pos[:, 1].min()))
    else:
        aperture = float(2.0 * np.linalg.norm(pos, axis=1).max())
    return ArrayGeometry(kind=kind, wavelength=float(wavelength),
                         elements=pos, aperture=aperture)


def build_ula(aperture: float, wavelength: float) -> ArrayGeometry:
    """Uniform linear array on the x axis, spacing exactly lambda/2.

    Element count is floor(2 D / lambda) + 1; the aperture field records
    the actual end-to-end extent.
    """
    if not aperture >= wavelength / 2:
        raise ValueError(f"ULA aperture must be >= lambda/2, got {aperture}")
    n = int(math.floor(2.0 * aperture / wavelength + _TOL)) + 1
    pos = np.zeros((n, 3))
    pos[:, 0] = (np.arange(n) - (n - 1) / 2.0) * (wavelength / 2.0)
    return _finish(GeometryKind.ULA, wavelength, pos)


def build_uca(diameter: float, wavelength: float) -> ArrayGeometry:
    """Uniform circular array of the given diameter, edge-on to +z.

    Elements sit in the x-z plane, equally spaced on the circle with arc
    spacing <= lambda/2 (count = ceil(pi D / (lambda/2))).
    """
    if not diameter >= wavelength / 2:
        raise ValueError(f"UCA diameter must be >= lambda/2, got {diameter}")
    n = int(math.ceil(2.0 * math.pi * diameter / wavelength - _TOL))
    theta = 2.0 * math.pi * np.arange(n) / n
    pos = np.zeros((n, 3))
    pos[:, 0] = 0.5 * diameter * np.cos(theta)
    pos[:, 2] = 0.5 * diameter * np.sin(theta)
    return _finish(GeometryKind.UCA, wavelength, pos)


def build_ura(diagonal: float, wavelength: float) -> ArrayGeometry:
    """Square array in the x-y plane, sized by its diagonal.

    Per-axis spacing is exactly lambda/2, per-axis count
    floor(sqrt(2) D / lambda) + 1.
    """
    if not diagonal >= wavelength / math.sqrt(2):
        raise ValueError(f"URA diagonal must be >= lambda/sqrt(2), got {diagonal}")
    n = int(math.floor(math.sqrt(2.0) * diagonal / wavelength + _TOL)) + 1
    grid = (np.arange(n) - (n - 1) / 2.0) * (wavelength / 2.0)
    gx, gy = np.meshgrid(grid, grid, indexing="ij")
    pos = np.column_stack([gx.ravel(), gy.ravel(), np.zeros(n * n)])
    return _finish(GeometryKind.URA, wavelength, pos)


def build_upca(diameter: float, wavelength: float) -> ArrayGeometry:
    """Planar circular array: concentric rings in the x-y plane.

    A center element plus rings at radial pitch lambda/2 out to D/2, each
    ring populated with max(1, ceil(2 pi r / (lambda/2))) elements so the
    arc spacing never exceeds lambda/2.
    """
    if not diameter >= wavelength:
        raise ValueError(f"UPCA diameter must be >= lambda, got {diameter}")
    n_rings = int(math.floor(diameter / wavelength + _TOL))
    chunks = [np.zeros((1, 3))]
    for i in range(1, n_rings + 1):
        r = 0.5 * i * wavelength
        count = max(1, int(math.ceil(4.0 * math.pi * r / wavelength - _TOL)))
        theta = 2.0 * math.pi * np.arange(count) / count
        ring = np.zeros((count, 3))
        ring[:, 0] = r * np.cos(theta)
        ring[:, 1] = r * np.sin(theta)
        chunks.append(ring)
    return _finish(GeometryKind.UPCA, wavelength, np.vstack(chunks))


_BUILDERS = {
    GeometryKind.ULA: build_ula,
    GeometryKind.UCA: build_uca,
    GeometryKind.URA: build_ura,
    GeometryKind.UPCA: build_upca,
}


def build_array(kind: GeometryKind, aperture: float, wavelength: float) -> ArrayGeometry:
    """Build any layout by kind; aperture is the kind's D (see builders)."""
    return _BUILDERS[kind](aperture, wavelength)


def single_element(wavelength: float) -> ArrayGeometry:
    """Degenerate one-element array at the origin (kind None, aperture 0)."""
    return ArrayGeometry(kind=None, wavelength=float(wavelength),
                         elements=np.zeros((1, 3)), aperture=0.0)


def fraunhofer_distance(geometry: ArrayGeometry) -> float:
    """Far-field boundary 2 D^2 / lambda for the geometry's aperture."""
    return 2.0 * geometry.aperture ** 2 / geometry.wavelength


def effective_aperture_ula(aperture: float, azimuth: float) -> float:
    """Projected ULA aperture D sin(theta) for a target at azimuth theta.

    theta = pi/2 is broadside (full aperture), theta = 0 endfire (zero).
    """
    if not 0.0 <= azimuth <= math.pi:
        raise ValueError(f"azimuth must be in [0, pi], got {azimuth}")
    return aperture * math.sin(azimuth)


@dataclass(frozen=True)
class SensingSetup:
    """Transmit and receive geometries plus the processing mode.

    MIMO requires identical collocated apertures on both sides.  SIMO/MISO
    uses one real aperture and a single element on the other side; a
    bistatic pair of multi-element apertures is not supported.
    """

    tx: ArrayGeometry
    rx: ArrayGeometry
    mode: ProcessingMode
    frequency: float = field(default=0.0)

    def __post_init__(self):
        if abs(self.tx.wavelength - self.rx.wavelength) > 1e-12 * self.tx.wavelength:
            raise ValueError("tx and rx wavelengths differ")
        if self.frequency == 0.0:
            object.__setattr__(self, "frequency", SPEED_OF_LIGHT / self.tx.wavelength)
        if self.mode is ProcessingMode.MIMO:
            if self.tx is not self.rx and not (
                self.tx.elements.shape == self.rx.elements.shape
                and np.array_equal(self.tx.elements, self.rx.elements)
            ):
                raise ValueError(
                    "MIMO mode requires identical collocated tx/rx apertures"
                )
        else:
            if self.tx.n_elements > 1 and self.rx.n_elements > 1:
                raise ValueError(
                    "SIMO/MISO takes a single element on one side; separated "
                    "multi-element apertures (bistatic) are unsupported"
                )

    @property
    def aperture(self) -> ArrayGeometry:
        """The multi-element side (either side for MIMO)."""
        return self.tx if self.tx.n_elements > 1 else self.rx


def simo_miso_setup(aperture: ArrayGeometry) -> SensingSetup:
    """Single-aperture link: one transmit element, the array on receive."""
    return SensingSetup(tx=single_element(aperture.wavelength), rx=aperture,
                        mode=ProcessingMode.SIMO_MISO)


def mimo_setup(aperture: ArrayGeometry) -> SensingSetup:
    """Monostatic MIMO link: the same aperture transmits and receives."""
    return SensingSetup(tx=aperture, rx=aperture, mode=ProcessingMode.MIMO)


def export_geometry_csv(geometry: ArrayGeometry, stream) -> None:
    """Write element positions as CSV rows index,x,y,z (meters)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["index", "x", "y", "z"])
    for i, (x, y, z) in enumerate(geometry.elements):
        writer.writerow([i, f"{x:.12g}", f"{y:.12g}", f"{z:.12g}"])


def geometry_csv_text(geometry: ArrayGeometry) -> str:
    buf = io.StringIO()
    export_geometry_csv(geometry, buf)
    return buf.getvalue()
