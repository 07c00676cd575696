"""Quantum-carpet solver: eigenmode wave packets confined in a 1-D box.

Thin Python surface over the C++ core. The main entry points are
``PhysicalParams.natural``, ``build_modeset``, ``density_grid`` and
``autocorrelation``; see the project README for the figure recipes.
"""

from qcarpet._core import (  # noqa: F401
    ColorMap,
    CsvParseError,
    DegeneratePacketError,
    DensityGrid,
    GridComparison,
    GridSpec,
    KgBranch,
    ModeDescriptor,
    ModelKind,
    ModeSet,
    PacketSpec,
    PhysicalParams,
    RevivalPeak,
    analytic_revival_time,
    autocorrelation,
    build_dirac_coeffs,
    build_kg_coeffs,
    build_modeset,
    build_schrodinger_coeffs,
    compare_grids,
    density_grid,
    density_grid_over,
    detect_revivals,
    dirac_energy,
    dirac_momentum,
    dirac_phase,
    double_sum_oracle,
    kg_energy,
    limit_energy,
    limit_momentum,
    read_grid_csv,
    schrodinger_energy,
    wavefunction_at,
    write_grid_csv,
    write_pgm,
    write_png,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
