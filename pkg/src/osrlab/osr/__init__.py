from .comp import (CompCode, ReconstructMode, ReconstructState, build_comp, parse_modes,
                   reconstruct, try_build_comp)
from .feasibility import (FeasibilityReport, PointClass, PointFeasibility, classify,
                          feasibility_report)
from .mapping import (OsrMapping, OsrTransResult, PassesResult, compose_mappings, do_passes,
                      identity_mapping, mapping_between, mappings_for, osr_trans)

__all__ = [
    "CompCode", "ReconstructMode", "ReconstructState", "build_comp", "parse_modes", "reconstruct",
    "try_build_comp",
    "FeasibilityReport", "PointClass", "PointFeasibility", "classify", "feasibility_report",
    "OsrMapping", "OsrTransResult", "PassesResult", "compose_mappings", "do_passes",
    "identity_mapping", "mapping_between", "mappings_for", "osr_trans",
]
