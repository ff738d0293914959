"""secant3: constructive decomposition and certification of partially
symmetric tensors of border rank three under Segre-Veronese embeddings."""

from .errors import (AutarkyViolation, CapExceeded, DegenerateJet,
                     IndependenceFailure, InvalidInput, InvalidPresentation,
                     InvalidRange, NotAnEmbedding, NotATangent, NotInSpan,
                     NotMinimal, RetriesExhausted, Secant3Error,
                     VerificationFailed)
from .tensorspace import (Decomposition, FlatteningReport, Format, JetScheme,
                          MultiJet, PSTensor, embed, flatten,
                          flattening_report, jet_vectors, tensor_combination,
                          verify_decomposition)
from .curves import (CurveMap, Linearization, PiecewiseCurve,
                     conic_through_3jet, curve_through_jet3, extend_jet_to_map,
                     hyperplane_section_decompose, linearize, mobius_from_3jet)
from .sylvester import (RncDecomposition, catalecticant, decompose_via_curve,
                        sylvester_from_jet, sylvester_general)
from .decompose import (Certificate, Jet3, PointPlusTangent,
                        TangentPresentation, ThreePoints, TwoTangentsOnLine,
                        autarky_reduce, decompose_border3,
                        decompose_curvilinear, decompose_tangent,
                        minimal_jet_order, rank_bound_border3,
                        rank_bound_curvilinear, tangent_support)
from .witness import WitnessBundle, border_family, make_witness, residual_slope

__version__ = "0.1.0"

__all__ = [
    "AutarkyViolation", "CapExceeded", "Certificate", "CurveMap",
    "Decomposition", "DegenerateJet", "FlatteningReport", "Format",
    "IndependenceFailure", "InvalidInput", "InvalidPresentation",
    "InvalidRange", "Jet3", "JetScheme", "Linearization", "MultiJet",
    "NotAnEmbedding", "NotATangent", "NotInSpan", "NotMinimal",
    "PSTensor", "PiecewiseCurve", "PointPlusTangent", "RetriesExhausted",
    "RncDecomposition", "Secant3Error", "TangentPresentation", "ThreePoints",
    "TwoTangentsOnLine", "VerificationFailed", "WitnessBundle",
    "autarky_reduce", "border_family", "catalecticant", "conic_through_3jet",
    "curve_through_jet3", "decompose_border3", "decompose_curvilinear",
    "decompose_tangent", "decompose_via_curve", "embed", "extend_jet_to_map",
    "flatten", "flattening_report", "hyperplane_section_decompose",
    "jet_vectors", "linearize", "make_witness", "minimal_jet_order",
    "mobius_from_3jet", "rank_bound_border3", "rank_bound_curvilinear",
    "residual_slope", "sylvester_from_jet", "sylvester_general",
    "tangent_support", "tensor_combination", "verify_decomposition",
]
