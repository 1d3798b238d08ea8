from .counterexample import AugmentMode, CounterexamplePair, PairProvenance, PolyhedronKind, SearchResult
from .point_cloud import AlignmentResult, PointCloud, Quantizer, SymmetryGroup
from .reconstruction import ReconstructionResult, TriangularEncoding
from .refinement import Coloring, EdgeColoring, Fingerprint, ModelKind, RefineConfig, Verdict
from .symmetry import MassFunction, ScanRow, ScanTable, SymmetryReport

__all__ = [
    "AlignmentResult",
    "AugmentMode",
    "Coloring",
    "CounterexamplePair",
    "EdgeColoring",
    "Fingerprint",
    "MassFunction",
    "ModelKind",
    "PairProvenance",
    "PointCloud",
    "PolyhedronKind",
    "Quantizer",
    "ReconstructionResult",
    "RefineConfig",
    "ScanRow",
    "ScanTable",
    "SearchResult",
    "SymmetryGroup",
    "SymmetryReport",
    "TriangularEncoding",
    "Verdict",
]
