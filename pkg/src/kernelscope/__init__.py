"""kernelscope: a numerical laboratory for parameter planes of entire-function
families — singular-orbit classification, hyperbolic-component extraction,
kernel estimation for component sequences, and dynamically sensible metrics.
"""

from .errors import (DegenerateParameter, EmptySet, GridMismatch,
                     KernelscopeError, OutOfGrid, OverflowSignal,
                     SeedNotHyperbolic)
from .families import (FAMILY_IDS, INF, FamilySpec, cubic_fixed_point,
                       derivative, evaluate, get_family, list_families, mu_n,
                       singular_values)
from .metrics import (MetricReport, chi_dyn, chi_luc, chordal_distance,
                      hausdorff_distance)
from .orbits import (CycleRecord, OrbitBudget, ParameterClassification,
                     SingularOutcome, Verdict, classify_parameter,
                     detect_cycle, orbit, refine_cycle)
from .scanner import (ConvergenceEntry, ConvergenceReport, DichotomyVerdict,
                      ProbeReport, ProbeViolation, ScanResult,
                      convergence_report, default_workers,
                      hyperbolic_component, openness_probe,
                      period_stability_map, scan)
from .setgeom import (GridMask, GridSpec, KernelEstimate,
                      boundary_cell_count, component_of,
                      connected_components, disk_mask, empty_mask, full_mask,
                      kernel_estimate, mask_hausdorff, rasterize, read_pbm,
                      render_pbm, symmetric_difference_fraction, write_pbm)

__version__ = "0.1.0"

__all__ = [
    "DegenerateParameter", "EmptySet", "GridMismatch", "KernelscopeError",
    "OutOfGrid", "OverflowSignal", "SeedNotHyperbolic",
    "FAMILY_IDS", "INF", "FamilySpec", "cubic_fixed_point", "derivative",
    "evaluate", "get_family", "list_families", "mu_n", "singular_values",
    "MetricReport", "chi_dyn", "chi_luc", "chordal_distance",
    "hausdorff_distance",
    "CycleRecord", "OrbitBudget", "ParameterClassification",
    "SingularOutcome", "Verdict", "classify_parameter", "detect_cycle",
    "orbit", "refine_cycle",
    "ConvergenceEntry", "ConvergenceReport", "DichotomyVerdict",
    "ProbeReport", "ProbeViolation", "ScanResult", "convergence_report",
    "default_workers", "hyperbolic_component", "openness_probe",
    "period_stability_map", "scan",
    "GridMask", "GridSpec", "KernelEstimate", "boundary_cell_count",
    "component_of", "connected_components", "disk_mask", "empty_mask",
    "full_mask", "kernel_estimate", "mask_hausdorff", "rasterize",
    "read_pbm", "render_pbm", "symmetric_difference_fraction", "write_pbm",
    "__version__",
]
