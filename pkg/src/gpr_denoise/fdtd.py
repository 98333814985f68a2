"""Two-dimensional FDTD forward modelling of common-offset GPR profiles.

The solver works on a transverse-magnetic Yee grid: the out-of-plane
electric field ``ey`` lives on nodes, ``hx`` is staggered half a cell in
depth and ``hz`` half a cell horizontally. The model domain is surrounded by
a convolutional perfectly matched layer and a PEC frame. Model coordinates
are x (horizontal, m) and z (depth below the top of the model, m).
"""

import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import InvalidModel, ParseError
from .executor import map_ordered
from .signal import Radargram, Trace
from .synth import ricker_values

logger = logging.getLogger(__name__)

C0 = 299_792_458.0
MU0 = 4e-7 * math.pi
EPS0 = 1.0 / (MU0 * C0**2)
ETA0 = MU0 * C0
NS = 1e-9

PML_ORDER = 3
PML_REFLECTION = 1e-6
SOURCE_DELAY_PERIODS = 1.2
SOURCE_CUTOFF_PERIODS = 3.0
MIN_CELLS_PER_WAVELENGTH = 10
# first midpoint, spacing and trace count of the full-resolution survey line
PAPER_PROFILE = (0.165, 0.0175, 125)


@dataclass
class Material:
    eps_r: float
    sigma: float

    def validate(self, where: str) -> None:
        if not self.eps_r >= 1:
            raise InvalidModel(f"{where}: relative permittivity must be >= 1, got {self.eps_r}")
        if not self.sigma >= 0:
            raise InvalidModel(f"{where}: conductivity must be >= 0, got {self.sigma}")


@dataclass
class Rect:
    """Axis-aligned rectangle [x0, x1] x [z0, z1] in m."""

    x0: float
    z0: float
    x1: float
    z1: float
    material: Material

    def contains(self, x: np.ndarray, z: np.ndarray) -> np.ndarray:
        return (x >= self.x0) & (x <= self.x1) & (z >= self.z0) & (z <= self.z1)


@dataclass
class Circle:
    """Disc centered at (xc, zc) in m."""

    xc: float
    zc: float
    radius: float
    material: Material

    def contains(self, x: np.ndarray, z: np.ndarray) -> np.ndarray:
        return (x - self.xc) ** 2 + (z - self.zc) ** 2 <= self.radius**2


@dataclass
class ForwardModel:
    """Material section and acquisition geometry of a common-offset survey.

    Blocks are painted over the background in list order. Antennas sit at
    ``antenna_z``; trace ``i`` has its tx-rx midpoint at ``first + i * spacing``
    with the transmitter on the left.

    Attributes:
        width: Model width in m
        depth: Model depth in m
        cell: Cell size dx = dz in m
        background: Material filling everything not covered by a block
        blocks: Rectangles and circles
        fc: Ricker source center frequency in MHz
        offset: Transmitter-receiver separation in m
        traces: Number of traces
        spacing: Trace spacing in m
        first: Midpoint of the first trace in m
        antenna_z: Antenna depth in m
        window: Recording window in ns
        samples: Output samples per trace
        pml: Absorbing layer thickness in cells
        courant: Fraction of the 2D stability limit used for the time step
        dt: Explicit time step in ns, overrides ``courant``
        aperture: Horizontal reach in m kept on each side of the antennas when
            simulating one trace; None simulates the whole width
    """

    width: float = 2.5
    depth: float = 0.45
    cell: float = 0.0025
    background: Material = field(default_factory=lambda: Material(1.0, 1e-10))
    blocks: list[Rect | Circle] = field(default_factory=list)
    fc: float = 900.0
    offset: float = 0.025
    traces: int = 125
    spacing: float = 0.0175
    first: float = 0.165
    antenna_z: float = 0.15
    window: float = 12.0
    samples: int = 512
    pml: int = 10
    courant: float = 0.95
    dt: float | None = None
    aperture: float | None = None

    @property
    def time_step(self) -> float:
        """FDTD time step in seconds."""
        if self.dt is not None:
            return self.dt * NS
        return self.courant * self.cell / (C0 * math.sqrt(2.0))

    def antenna_positions(self, index: int) -> tuple[float, float]:
        """Horizontal (tx, rx) positions of trace ``index`` in m."""
        midpoint = self.first + index * self.spacing
        return midpoint - self.offset / 2, midpoint + self.offset / 2

    def trace_span(self, index: int) -> tuple[float, float]:
        """Horizontal grid extent in m used for trace ``index``.

        The aperture is widened to whole cells and clipped to the model.
        """
        if self.aperture is None:
            return 0.0, self.width
        tx, rx = self.antenna_positions(index)
        cells = math.ceil(self.aperture / self.cell)
        lo = max(0, round(tx / self.cell) - cells)
        hi = min(round(self.width / self.cell), round(rx / self.cell) + cells)
        return lo * self.cell, hi * self.cell

    def materials(self) -> list[Material]:
        return [self.background] + [b.material for b in self.blocks]

    def validate(self) -> None:
        """Check stability, geometry and materials.

        Raises:
            InvalidModel: If the model cannot be simulated
        """
        for name in ("width", "depth", "cell", "fc", "window"):
            value = getattr(self, name)
            if not value > 0:
                raise InvalidModel(f"{name} must be positive, got {value}")
        if self.traces < 1:
            raise InvalidModel(f"traces must be at least 1, got {self.traces}")
        if self.samples < 2:
            raise InvalidModel(f"samples must be at least 2, got {self.samples}")
        if self.pml < 0:
            raise InvalidModel(f"pml must be non-negative, got {self.pml}")
        if self.offset < 0 or self.spacing < 0:
            raise InvalidModel("offset and spacing must be non-negative")
        if self.aperture is not None and not self.aperture > 0:
            raise InvalidModel(f"aperture must be positive, got {self.aperture}")
        self.background.validate("background")
        for i, block in enumerate(self.blocks, start=1):
            block.material.validate(f"block {i}")

        courant_number = self.time_step * C0 * math.sqrt(2.0) / self.cell
        if not 0 < courant_number <= 1:
            raise InvalidModel(
                f"time step {self.time_step / NS:.4g} ns violates the stability bound "
                f"(Courant number {courant_number:.3f})"
            )

        for index in (0, self.traces - 1):
            for x in self.antenna_positions(index):
                if not (0 <= x <= self.width and 0 <= self.antenna_z <= self.depth):
                    raise InvalidModel(
                        f"trace {index}: antenna at ({x:.4f}, {self.antenna_z:.4f}) m lies outside "
                        f"the {self.width} x {self.depth} m model"
                    )

        eps_max = max(m.eps_r for m in self.materials())
        wavelength = C0 / (self.fc * 1e6 * math.sqrt(eps_max))
        if self.cell > wavelength / MIN_CELLS_PER_WAVELENGTH:
            logger.warning(
                "cell %.4g m exceeds a tenth of the %.4g m wavelength at %g MHz; expect numerical dispersion",
                self.cell, wavelength, self.fc,
            )


def build_paper_model(cell: float = 0.0025, traces: int = 125, aperture: float | None = None) -> ForwardModel:
    """Air over dry sand with an air-filled circular void.

    The section is 2.5 m wide and 0.45 m deep: 0.15 m of air over 0.30 m of
    sand, the antennas on the sand surface and a 0.075 m diameter void
    centered horizontally halfway down the sand layer. Fewer traces are
    spread over the same 2.17 m line.

    Args:
        cell: Cell size in m
        traces: Number of traces
        aperture: Per-trace horizontal reach in m, see ForwardModel

    Returns:
        Unvalidated model
    """
    first, spacing, count = PAPER_PROFILE
    if traces != count:
        spacing = spacing * (count - 1) / (traces - 1) if traces > 1 else 0.0
    air = Material(1.0, 1e-10)
    sand = Material(3.0, 1e-4)
    return ForwardModel(
        width=2.5,
        depth=0.45,
        cell=cell,
        background=air,
        blocks=[
            Rect(0.0, 0.15, 2.5, 0.45, sand),
            Circle(1.25, 0.30, 0.0375, Material(1.0, 1e-10)),
        ],
        fc=900.0,
        offset=0.025,
        traces=traces,
        spacing=spacing,
        first=first,
        antenna_z=0.15,
        window=12.0,
        samples=512,
        aperture=aperture,
    )



def _pml_profile(positions: np.ndarray, n_nodes: int, npml: int, sigma_max: float) -> np.ndarray:
    """Graded conductivity at node positions (in cells) for layers of ``npml`` cells."""
    if npml == 0:
        return np.zeros_like(positions)
    depth = np.maximum(npml - positions, positions - (n_nodes - 1 - npml))
    depth = np.clip(depth, 0.0, npml) / npml
    return sigma_max * depth**PML_ORDER


def _cpml_coefficients(sigma: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    b = np.exp(-sigma * dt / EPS0)
    return b, b - 1.0


class FdtdSimulation:
    """Time stepping of one transmitter firing into a forward model.

    Attributes:
        model: Forward model being simulated
        dt: Time step in s
        steps: Number of steps completed
        x0: Left edge of the grid interior in m
        x1: Right edge of the grid interior in m
    """

    def __init__(
        self,
        model: ForwardModel,
        tx: tuple[float, float],
        rx: tuple[float, float] | None = None,
        span: tuple[float, float] | None = None,
    ) -> None:
        """Build the grid and place the antennas.

        Args:
            model: Validated or unvalidated forward model
            tx: Transmitter (x, z) in m, snapped to the nearest node
            rx: Receiver (x, z) in m, snapped to the nearest node
            span: Horizontal grid extent (x0, x1) in m, the whole width when None

        Raises:
            InvalidModel: If the model is invalid or an antenna is off the grid
        """
        model.validate()
        self.model = model
        self.dt = model.time_step
        self.steps = 0
        dx = model.cell
        npml = model.pml
        self.x0, self.x1 = span if span is not None else (0.0, model.width)
        self.first_column = round(self.x0 / dx)
        nx = round(self.x1 / dx) - self.first_column + 1 + 2 * npml
        nz = round(model.depth / dx) + 1 + 2 * npml
        self.shape = (nz, nx)

        x = np.clip((self.first_column + np.arange(nx) - npml) * dx, self.x0, self.x1)
        z = np.clip((np.arange(nz) - npml) * dx, 0.0, model.depth)
        xx, zz = np.meshgrid(x, z)
        eps_r = np.full(self.shape, model.background.eps_r)
        sigma = np.full(self.shape, model.background.sigma)
        for block in model.blocks:
            inside = block.contains(xx, zz)
            eps_r[inside] = block.material.eps_r
            sigma[inside] = block.material.sigma
        self.eps = EPS0 * eps_r

        loss = sigma * self.dt / (2.0 * self.eps)
        self.ca = ((1.0 - loss) / (1.0 + loss))[1:-1, 1:-1]
        self.cb = (self.dt / self.eps / (1.0 + loss))[1:-1, 1:-1] / dx
        self.dt_mu = self.dt / (MU0 * dx)

        sigma_max = -(PML_ORDER + 1) * math.log(PML_REFLECTION) / (2.0 * ETA0 * max(npml, 1) * dx)
        bx_e, ax_e = _cpml_coefficients(_pml_profile(np.arange(nx, dtype=float), nx, npml, sigma_max), self.dt)
        bx_h, ax_h = _cpml_coefficients(_pml_profile(np.arange(nx - 1) + 0.5, nx, npml, sigma_max), self.dt)
        bz_e, az_e = _cpml_coefficients(_pml_profile(np.arange(nz, dtype=float), nz, npml, sigma_max), self.dt)
        bz_h, az_h = _cpml_coefficients(_pml_profile(np.arange(nz - 1) + 0.5, nz, npml, sigma_max), self.dt)
        self.bx_e, self.ax_e = bx_e[None, 1:-1], ax_e[None, 1:-1]
        self.bz_e, self.az_e = bz_e[1:-1, None], az_e[1:-1, None]
        self.bx_h, self.ax_h = bx_h[None, :], ax_h[None, :]
        self.bz_h, self.az_h = bz_h[:, None], az_h[:, None]

        self.ey = np.zeros(self.shape)
        self.ey_prev = np.zeros(self.shape)
        self.hx = np.zeros((nz - 1, nx))
        self.hz = np.zeros((nz, nx - 1))
        self.psi_hx = np.zeros_like(self.hx)
        self.psi_hz = np.zeros_like(self.hz)
        self.psi_eyz = np.zeros((nz - 2, nx - 2))
        self.psi_eyx = np.zeros((nz - 2, nx - 2))

        self.tx = self._node(tx, "transmitter")
        self.rx = self._node(rx, "receiver") if rx is not None else None
        self.source_delay = SOURCE_DELAY_PERIODS / model.fc * 1e3
        self.source_cutoff = SOURCE_CUTOFF_PERIODS / model.fc * 1e3

    def _node(self, position: tuple[float, float], name: str) -> tuple[int, int]:
        x, z = position
        npml = self.model.pml
        iz = npml + round(z / self.model.cell)
        ix = npml + round(x / self.model.cell) - self.first_column
        nz, nx = self.shape
        if not (self.x0 <= x <= self.x1 and 0 <= z <= self.model.depth) or not (
            0 < iz < nz - 1 and 0 < ix < nx - 1
        ):
            raise InvalidModel(f"{name} at ({x:.4f}, {z:.4f}) m is outside the grid interior")
        return iz, ix

    @property
    def time(self) -> float:
        """Time of the current electric field in ns."""
        return self.steps * self.dt / NS

    def source(self, t: float) -> float:
        """Source current density at ``t`` ns; zero after the cutoff."""
        if t > self.source_cutoff:
            return 0.0
        return float(ricker_values(t, self.model.fc, self.source_delay))

    def step(self) -> None:
        """Advance the magnetic field by half a step and the electric field by a full step."""
        ey = self.ey
        dey_dz = ey[1:, :] - ey[:-1, :]
        self.psi_hx = self.bz_h * self.psi_hx + self.az_h * dey_dz
        self.hx += self.dt_mu * (dey_dz + self.psi_hx)
        dey_dx = ey[:, 1:] - ey[:, :-1]
        self.psi_hz = self.bx_h * self.psi_hz + self.ax_h * dey_dx
        self.hz -= self.dt_mu * (dey_dx + self.psi_hz)

        dhx_dz = self.hx[1:, 1:-1] - self.hx[:-1, 1:-1]
        dhz_dx = self.hz[1:-1, 1:] - self.hz[1:-1, :-1]
        self.psi_eyz = self.bz_e * self.psi_eyz + self.az_e * dhx_dz
        self.psi_eyx = self.bx_e * self.psi_eyx + self.ax_e * dhz_dx
        curl = dhx_dz - dhz_dx + self.psi_eyz - self.psi_eyx

        # the outer frame of both buffers stays zero (PEC)
        updated = self.ey_prev
        updated[1:-1, 1:-1] = self.ca * ey[1:-1, 1:-1] + self.cb * curl
        current = self.source((self.steps + 0.5) * self.dt / NS)
        if current:
            iz, ix = self.tx
            updated[iz, ix] -= self.cb[iz - 1, ix - 1] * self.model.cell * current
        self.ey_prev, self.ey = ey, updated
        self.steps += 1

    def receiver_value(self) -> float:
        if self.rx is None:
            raise InvalidModel("simulation has no receiver")
        return float(self.ey[self.rx])

    def energy(self) -> float:
        """Discrete electromagnetic energy per unit length (J/m).

        Uses the leapfrog invariant 1/2 mu |H^(n+1/2)|^2 + 1/2 eps E^n . E^(n+1),
        which is conserved exactly by lossless updates inside a PEC box.
        """
        area = self.model.cell**2
        electric = np.sum(self.eps * self.ey_prev * self.ey)
        magnetic = MU0 * (np.sum(self.hx**2) + np.sum(self.hz**2))
        return 0.5 * area * float(electric + magnetic)

    def record(self) -> Trace:
        """Run the recording window and resample the receiver to the output grid.

        Returns:
            Trace of ``model.samples`` samples spanning ``model.window`` ns
        """
        total = math.ceil(self.model.window * NS / self.dt) + 1
        times = np.empty(total + 1)
        values = np.empty(total + 1)
        times[0] = self.time
        values[0] = self.receiver_value()
        for n in range(1, total + 1):
            self.step()
            times[n] = self.time
            values[n] = self.receiver_value()
        out_dt = self.model.window / self.model.samples
        out_times = out_dt * np.arange(self.model.samples)
        return Trace(np.interp(out_times, times, values), out_dt)


def simulate_trace(model: ForwardModel, index: int) -> Trace:
    """Simulate trace ``index`` of a model."""
    tx, rx = model.antenna_positions(index)
    simulation = FdtdSimulation(model, (tx, model.antenna_z), (rx, model.antenna_z), model.trace_span(index))
    trace = simulation.record()
    logger.debug(
        "trace %d: %d steps of %.4g ns over x in [%.4g, %.4g] m",
        index, simulation.steps, simulation.dt / NS, simulation.x0, simulation.x1,
    )
    return trace


def fdtd_forward(model: ForwardModel, jobs: int = 1) -> Radargram:
    """Simulate every trace of a common-offset profile.

    Args:
        model: Forward model
        jobs: Maximum number of traces simulated concurrently

    Returns:
        Radargram with one trace per antenna position, trace spacing
        ``model.spacing`` and ``model.samples`` samples over the window

    Raises:
        InvalidModel: If the model is unstable or an antenna is off the grid
    """
    model.validate()
    logger.debug(
        "Simulating %d traces on a %.4g m grid, dt %.4g ns",
        model.traces, model.cell, model.time_step / NS,
    )
    traces = map_ordered(lambda i: simulate_trace(model, i), list(range(model.traces)), jobs)
    return Radargram.from_traces(traces, model.spacing)


SCALAR_KEYS = {
    "width": float,
    "depth": float,
    "cell": float,
    "fc": float,
    "offset": float,
    "traces": int,
    "spacing": float,
    "first": float,
    "antenna_z": float,
    "window": float,
    "samples": int,
    "pml": int,
    "courant": float,
    "dt": float,
    "aperture": float,
}


def _numbers(values: list[str], count: int, key: str, line: int) -> list[float]:
    if len(values) != count:
        raise ParseError(f"{key} expects {count} values, got {len(values)}", row=line)
    result = []
    for column, value in enumerate(values, start=1):
        try:
            result.append(float(value))
        except ValueError:
            raise ParseError(f"{key}: malformed number {value!r}", row=line, column=column) from None
    return result


def parse_model(text: str) -> ForwardModel:
    """Parse a key-value model description.

    Lines hold ``key = values``; ``#`` starts a comment. ``rect`` and
    ``circle`` lines are repeatable and painted in file order. Keys that are
    not given keep the ForwardModel defaults.

    Args:
        text: Model file contents

    Returns:
        Parsed model, not yet validated

    Raises:
        ParseError: On unknown keys, wrong arity or malformed numbers
    """
    settings: dict[str, object] = {}
    blocks: list[Rect | Circle] = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition("=")
        key = key.strip()
        if not sep:
            raise ParseError(f"expected 'key = value', got {line!r}", row=line_number)
        values = rest.split()
        if key in SCALAR_KEYS:
            (number,) = _numbers(values, 1, key, line_number)
            convert = SCALAR_KEYS[key]
            if convert is int and not number.is_integer():
                raise ParseError(f"{key} must be an integer, got {values[0]!r}", row=line_number, column=1)
            settings[key] = convert(number)
        elif key == "background":
            eps_r, sigma = _numbers(values, 2, key, line_number)
            settings[key] = Material(eps_r, sigma)
        elif key == "rect":
            x0, z0, x1, z1, eps_r, sigma = _numbers(values, 6, key, line_number)
            blocks.append(Rect(x0, z0, x1, z1, Material(eps_r, sigma)))
        elif key == "circle":
            xc, zc, radius, eps_r, sigma = _numbers(values, 5, key, line_number)
            blocks.append(Circle(xc, zc, radius, Material(eps_r, sigma)))
        else:
            raise ParseError(f"unknown key {key!r}", row=line_number)
    return replace(ForwardModel(), blocks=blocks, **settings)


def load_model(path: str | Path) -> ForwardModel:
    """Read a model file; see parse_model."""
    return parse_model(Path(path).read_text())
